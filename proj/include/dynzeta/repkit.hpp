#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dynzeta::repkit {

using Rational = boost::multiprecision::cpp_rational;

enum class Series { A, B, D };

/// A weight in the standard e_i basis. Coordinates are stored doubled so that
/// spin weights (all coordinates half-odd) stay integral.
class Weight {
 public:
  Weight() = default;
  explicit Weight(std::vector<std::int64_t> twice);

  static Weight integral(const std::vector<std::int64_t>& coords);
  static Weight from_rationals(const std::vector<Rational>& coords);
  /// Parses "1,0", "1/2,-1/2" or "0.5,0.5".
  static Weight parse(const std::string& text);

  std::size_t size() const { return twice_.size(); }
  const std::vector<std::int64_t>& twice() const { return twice_; }
  std::int64_t twice(std::size_t i) const { return twice_[i]; }
  Rational coord(std::size_t i) const { return Rational(twice_[i], 2); }
  double coord_double(std::size_t i) const { return 0.5 * static_cast<double>(twice_[i]); }
  bool is_zero() const;
  bool is_spin() const;  // all coordinates half-odd
  std::string to_string() const;

  Weight operator+(const Weight& o) const;
  Weight operator-(const Weight& o) const;
  Weight operator-() const;
  Weight scaled(std::int64_t k) const;

  auto operator<=>(const Weight&) const = default;

 private:
  std::vector<std::int64_t> twice_;
};

/// 4 times the standard inner product, an exact integer.
std::int64_t dot4(const Weight& a, const Weight& b);

struct RootSystem {
  Series series;
  int rank;
  int ambient;  // rank, or rank+1 for type A (realized in R^{n+1})
  std::vector<Weight> positive_roots;
  std::vector<Weight> simple_roots;
  Weight rho;
};

RootSystem make_root_system(Series series, int rank);

std::uint64_t weyl_group_order(Series series, int rank);

bool is_dominant(const RootSystem& rs, const Weight& w);
bool is_integral(const RootSystem& rs, const Weight& w);

/// Weyl's product formula without any dominance check; may be zero or negative.
Rational weyl_dimension_formula(const RootSystem& rs, const Weight& w);
std::int64_t weyl_dimension(const RootSystem& rs, const Weight& highest);

using WeightMultiset = std::map<Weight, std::int64_t>;

WeightMultiset freudenthal_multiplicities(const RootSystem& rs, const Weight& highest);

/// Moves w + rho into the dominant chamber by simple reflections. Returns the
/// resulting highest weight (minus rho) and the sign of the Weyl element, or
/// nothing when w + rho is singular.
std::optional<std::pair<Weight, int>> dot_dominant(const RootSystem& rs, const Weight& w);

/// Klimyk: decomposes V(mu) (x) V(nu) into irreducibles.
WeightMultiset tensor_decompose(const RootSystem& rs, const Weight& mu, const Weight& nu);

// ---------------------------------------------------------------------------
// Representations of M = Spin(d-1). Rank n = (d-1)/2, type D_n; d = 3 is the
// circle, realized as D_1 (no roots, one coordinate).

struct MIrrep {
  int d;
  Weight weight;

  auto operator<=>(const MIrrep&) const = default;
};

int m_rank(int d);
void check_odd_dimension(int d);
RootSystem m_root_system(int d);
MIrrep make_mirrep(int d, const Weight& weight);
MIrrep trivial_mirrep(int d);
std::int64_t dimension(const MIrrep& sigma);

struct VirtualMRep {
  int d = 3;
  std::map<Weight, std::int64_t> terms;

  VirtualMRep() = default;
  explicit VirtualMRep(int dim) : d(dim) {}
  VirtualMRep(const MIrrep& sigma);  // NOLINT: implicit lift of an irreducible

  void add(const Weight& w, std::int64_t mult);
  void add(const VirtualMRep& other, std::int64_t scale = 1);
  std::int64_t dimension() const;
  /// Sum of |multiplicity| * dimension, a bound on |character|.
  std::int64_t abs_dimension() const;
  bool operator==(const VirtualMRep&) const = default;
};

VirtualMRep tensor(const VirtualMRep& a, const VirtualMRep& b);

struct ExteriorPower {
  int p;
  VirtualMRep rep;
  int shift;  // the A-character exponent lambda
};

std::vector<ExteriorPower> exterior_powers_of_n(int d);

/// Restricted Weyl action: flips the sign of the last coordinate.
std::pair<MIrrep, bool> weyl_action(const MIrrep& sigma);
VirtualMRep weyl_action(const VirtualMRep& v);

}  // namespace dynzeta::repkit
