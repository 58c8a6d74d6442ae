#include "dynzeta/plancherel.hpp"

#include "dynzeta/errors.hpp"

namespace dynzeta::plancherel {

using repkit::MIrrep;
using repkit::VirtualMRep;
using repkit::Weight;

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(const Rational& c, int power) {
  std::vector<Rational> v(power + 1, Rational(0));
  v[power] = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

int Polynomial::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

Rational Polynomial::coeff(int k) const {
  return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : Rational(0);
}

Rational Polynomial::operator()(const Rational& s) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + it->convert_to<double>();
  return acc;
}

Polynomial Polynomial::shifted(const Rational& c) const {
  // Horner in the polynomial ring: P(s+c) = (...(a_n (s+c) + a_{n-1})(s+c) + ...)
  const Polynomial lin({c, Rational(1)});
  Polynomial acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + constant(*it);
  return acc;
}

Polynomial Polynomial::antiderivative() const {
  std::vector<Rational> v(coeffs_.size() + 1, Rational(0));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) v[k + 1] = coeffs_[k] / Rational(static_cast<long long>(k + 1));
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Rational> v(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) v[k] += coeffs_[k];
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) v[k] += o.coeffs_[k];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Rational(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (coeffs_.empty() || o.coeffs_.empty()) return {};
  std::vector<Rational> v(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const Rational& c) const {
  std::vector<Rational> v(coeffs_);
  for (auto& x : v) x *= c;
  return Polynomial(std::move(v));
}

bool Polynomial::operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

std::string Polynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    if (coeffs_[k] == 0) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coeffs_[k].str() + ")";
    if (k >= 1) out += "*s";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out;
}

std::vector<Rational> PlancherelPolynomial::coeffs() const {
  std::vector<Rational> v(d, Rational(0));
  for (int k = 0; k < d && k <= poly.degree(); ++k) v[k] = poly.coeff(k);
  return v;
}

namespace {

// Positive roots of the rank-(n+1) type-D compact form that involve the
// a-coordinate are e_0 -+ e_j; with rho_G = (n, n-1, ..., 0) and s = a + n they
// contribute prod_j (s^2 - nu_j^2), nu = sigma + rho_M. The remaining roots
// reproduce the Weyl dimension of sigma.
Polynomial irreducible_plancherel(int d, const Weight& w) {
  const int n = repkit::m_rank(d);
  const std::int64_t dim = repkit::weyl_dimension(repkit::m_root_system(d), w);
  Polynomial p = Polynomial::constant(Rational(dim));
  Rational denom = 1;
  for (int j = 1; j <= n; ++j) {
    const Rational nu = w.coord(j - 1) + Rational(n - j);
    p = p * Polynomial({-nu * nu, Rational(0), Rational(1)});
    denom *= Rational(j * (2 * n - j));
  }
  return p * (Rational(1) / denom);
}

}  // namespace

PlancherelPolynomial plancherel_polynomial(const MIrrep& sigma, int d, const Rational& scale) {
  if (sigma.d != d) throw DomainError("representation belongs to d=" + std::to_string(sigma.d));
  repkit::make_mirrep(d, sigma.weight);
  return PlancherelPolynomial{irreducible_plancherel(d, sigma.weight) * scale, sigma, d};
}

Polynomial plancherel_polynomial(const VirtualMRep& v, const Rational& scale) {
  Polynomial p;
  for (const auto& [w, m] : v.terms) p = p + irreducible_plancherel(v.d, w) * Rational(m);
  return p * scale;
}

std::complex<double> integrate_plancherel(const Polynomial& p, std::complex<double> s) {
  return p.antiderivative()(s);
}

Rational integrate_plancherel(const Polynomial& p, const Rational& s) { return p.antiderivative()(s); }

Rational casimir_shift(const MIrrep& sigma, int d) {
  const int n = repkit::m_rank(d);
  if (sigma.d != d) throw DomainError("representation belongs to d=" + std::to_string(sigma.d));
  const Weight rho_m = repkit::m_root_system(d).rho;
  const Weight shifted = sigma.weight + rho_m;
  return Rational(-n * n) + Rational(-repkit::dot4(rho_m, rho_m), 4) + Rational(repkit::dot4(shifted, shifted), 4);
}

Polynomial alternating_sum_polynomial(const VirtualMRep& v, bool alternate) {
  const int n = repkit::m_rank(v.d);
  Polynomial f;
  for (const auto& ext : repkit::exterior_powers_of_n(v.d)) {
    const Polynomial p = plancherel_polynomial(repkit::tensor(ext.rep, v));
    const Rational sign = (alternate && ext.p % 2 == 1) ? Rational(-1) : Rational(1);
    f = f + p.shifted(Rational(n - ext.shift)) * sign;
  }
  return f;
}

PlancherelPolynomial alternating_plancherel_sum(const MIrrep& sigma, int d) {
  if (sigma.d != d) throw DomainError("representation belongs to d=" + std::to_string(sigma.d));
  Polynomial f = alternating_sum_polynomial(VirtualMRep(sigma), true);
  if (!f.is_constant()) {
    throw InvariantViolation("alternating Plancherel sum is not constant: " + f.to_string());
  }
  return PlancherelPolynomial{f, sigma, d};
}

std::uint64_t euler_characteristic_L(int d) {
  const int n = repkit::m_rank(d);
  const std::uint64_t big = repkit::weyl_group_order(repkit::Series::D, n + 1);
  const std::uint64_t small = repkit::weyl_group_order(repkit::Series::D, n);
  if (big % small != 0) throw InvariantViolation("Weyl group orders do not divide");
  return big / small;
}

}  // namespace dynzeta::plancherel
