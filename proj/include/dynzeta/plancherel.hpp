#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dynzeta/repkit.hpp"

namespace dynzeta::plancherel {

using repkit::Rational;

/// Dense polynomial with exact rational coefficients, ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial constant(const Rational& c);
  static Polynomial monomial(const Rational& c, int power);

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  int degree() const;  // -1 for the zero polynomial
  bool is_constant() const { return degree() <= 0; }
  Rational coeff(int k) const;

  Rational operator()(const Rational& s) const;
  std::complex<double> operator()(std::complex<double> s) const;

  /// s -> P(s + c)
  Polynomial shifted(const Rational& c) const;
  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  bool operator==(const Polynomial& o) const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

struct PlancherelPolynomial {
  Polynomial poly;
  repkit::MIrrep sigma;
  int d;

  /// Coefficient vector padded to length d (degree d-1).
  std::vector<Rational> coeffs() const;
};

/// `scale` is the single recalibration hook for users of a different
/// Plancherel normalization; the default reproduces compact-form dimensions.
PlancherelPolynomial plancherel_polynomial(const repkit::MIrrep& sigma, int d, const Rational& scale = 1);
Polynomial plancherel_polynomial(const repkit::VirtualMRep& v, const Rational& scale = 1);

std::complex<double> integrate_plancherel(const Polynomial& p, std::complex<double> s);
Rational integrate_plancherel(const Polynomial& p, const Rational& s);

Rational casimir_shift(const repkit::MIrrep& sigma, int d);

/// Sum over p of sign_p * P_{psi_p (x) v}(s + rho - p) with sign_p = (-1)^p,
/// or +1 for every p when `alternate` is false. No constancy check.
Polynomial alternating_sum_polynomial(const repkit::VirtualMRep& v, bool alternate = true);

/// The alternating sum; throws InvariantViolation unless it is constant.
PlancherelPolynomial alternating_plancherel_sum(const repkit::MIrrep& sigma, int d);

std::uint64_t euler_characteristic_L(int d);

}  // namespace dynzeta::plancherel
