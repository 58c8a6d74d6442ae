#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace dynzeta::geodata {

using cplx = std::complex<double>;

struct PrimitiveGeodesic {
  std::string id;
  double length = 0;
  std::vector<double> holonomy_angles;  // rotation angles of m_gamma on the (d-1)-plane
  std::vector<cplx> chi_eigenvalues;    // spectrum of chi(gamma)
  int n_multiplicity = 1;               // power index n with gamma = gamma_0^n

  bool operator==(const PrimitiveGeodesic&) const = default;
};

struct LengthSpectrum {
  int d = 3;
  double vol_x = 1.0;
  int dim_chi = 1;
  std::vector<PrimitiveGeodesic> geodesics;

  bool operator==(const LengthSpectrum&) const = default;
};

/// Throws ValidationError (naming the offending record) on any invariant violation.
void validate(const LengthSpectrum& spec);

LengthSpectrum parse_length_spectrum(const std::string& jsonl);
LengthSpectrum load_length_spectrum(const std::string& path);
std::string format_length_spectrum(const LengthSpectrum& spec);
void save_length_spectrum(const LengthSpectrum& spec, const std::string& path);

LengthSpectrum synthesize_length_spectrum(std::uint64_t seed, int count, int d, int dim_chi, bool unitary);

/// Reduces an angle to (-pi, pi].
double reduce_angle(double x);
PrimitiveGeodesic geodesic_power(const PrimitiveGeodesic& g, int n);

// ---------------------------------------------------------------------------

struct SpectralEntry {
  cplx lambda;
  std::int64_t mult = 1;

  bool operator==(const SpectralEntry&) const = default;
};

struct OperatorSpectrum {
  std::string label;
  std::vector<SpectralEntry> entries;

  std::int64_t total_multiplicity() const;
  bool operator==(const OperatorSpectrum&) const = default;
};

/// Merges repeated eigenvalues (first-occurrence order) and rejects mult <= 0.
OperatorSpectrum make_operator_spectrum(std::string label, const std::vector<SpectralEntry>& entries);

enum class OperatorKind { laplace, first_order };

struct ConeParams {
  OperatorKind kind = OperatorKind::laplace;
  double shift = 0.0;  // C in Re(lambda) > -C
  double slope = 0.5;  // a in |Im| <= a (Re + C)
  double min_modulus = 0.5;
  double max_modulus = 10.0;
  int max_mult = 2;
  bool symmetric = false;          // first order: emit lambda and -lambda with equal multiplicity
  double negative_fraction = 0.3;  // first order: share of eigenvalues with Re < 0
  int eta0_count = 0;              // first order: extra entries with Re(lambda^2) <= 0
  bool weyl_mode = false;          // radial density from the Weyl law leading term
  int weyl_d = 3;
  double weyl_rank = 1.0;
  double weyl_vol = 1.0;
};

/// Leading Weyl-law constant K with N(c) ~ K c^{d/2}.
double weyl_constant(int d, double rank, double vol);

OperatorSpectrum synthesize_operator_spectrum(std::uint64_t seed, int count, const std::string& label,
                                              const ConeParams& params);

/// Entries outside the cone. For first-order spectra the cone is two-sided,
/// |Im| <= a (|Re| + C), and entries with Re(lambda^2) <= 0 are the allowed
/// finite exceptions, so they are not counted.
std::size_t cone_violations(const OperatorSpectrum& spec, const ConeParams& params);

OperatorSpectrum parse_operator_spectrum(const std::string& json);
OperatorSpectrum load_operator_spectrum(const std::string& path);
std::string format_operator_spectrum(const OperatorSpectrum& spec);
void save_operator_spectrum(const OperatorSpectrum& spec, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace dynzeta::geodata
