#include "dynzeta/zetafun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dynzeta/errors.hpp"
#include "dynzeta/numerics.hpp"

namespace dynzeta::zetafun {

using geodata::LengthSpectrum;
using geodata::PrimitiveGeodesic;

namespace {

constexpr std::int64_t kMaxPowers = 100000;

struct WeightTable {
  std::vector<std::vector<double>> coords;
  std::vector<double> mult;
};

WeightTable weight_table(const VirtualMRep& v) {
  WeightTable t;
  const auto rs = repkit::m_root_system(v.d);
  for (const auto& [hw, m] : v.terms) {
    for (const auto& [w, k] : repkit::freudenthal_multiplicities(rs, hw)) {
      std::vector<double> c(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) c[i] = w.coord_double(i);
      t.coords.push_back(std::move(c));
      t.mult.push_back(static_cast<double>(m * k));
    }
  }
  return t;
}

cplx table_character(const WeightTable& t, const std::vector<double>& angles, int n) {
  cplx sum = 0;
  for (std::size_t k = 0; k < t.coords.size(); ++k) {
    double phase = 0;
    for (std::size_t j = 0; j < angles.size(); ++j) phase += t.coords[k][j] * angles[j];
    sum += t.mult[k] * std::polar(1.0, n * phase);
  }
  return sum;
}

// One family of Euler-product terms
//   -coefficient * sum_n (1/n) tr chi(g^n) tr v(m^n) e^{-exponent n l} [/ det(I - Ad)]
struct Series {
  WeightTable weights;
  double abs_dim;
  cplx exponent;
  bool selberg;
  double coefficient;
};

double tail_bound(double c, double x, std::int64_t n) {
  return c * std::pow(x, static_cast<double>(n + 1)) / (static_cast<double>(n + 1) * (1.0 - x));
}

double max_modulus(const PrimitiveGeodesic& g) {
  double r = 0;
  for (cplx z : g.chi_eigenvalues) r = std::max(r, std::abs(z));
  return r;
}

// Returns the number of powers needed so every series' tail is below tol, and
// the achieved bound summed over the series.
std::pair<std::int64_t, double> powers_needed(const PrimitiveGeodesic& g, int dim_chi, int rank,
                                              const std::vector<Series>& series, double tol) {
  const double r = max_modulus(g);
  std::int64_t n_max = 0;
  for (const auto& s : series) {
    const double x = r * std::exp(-s.exponent.real() * g.length);
    if (!(x < 1.0)) {
      std::ostringstream os;
      os << "Euler product diverges at geodesic '" << g.id << "': ratio " << x << " >= 1";
      throw DivergenceError(os.str());
    }
    double c = dim_chi * s.abs_dim;
    if (s.selberg) c *= std::pow(1.0 - std::exp(-g.length), -2.0 * rank);
    std::int64_t n = 0;
    while (tail_bound(c, x, n) > tol) {
      if (++n > kMaxPowers) {
        std::ostringstream os;
        os << "tail tolerance " << tol << " needs more than " << kMaxPowers << " powers of geodesic '" << g.id << "'";
        throw TruncationError(os.str(), tail_bound(c, x, kMaxPowers));
      }
    }
    n_max = std::max(n_max, n);
  }
  double bound = 0;
  for (const auto& s : series) {
    const double x = r * std::exp(-s.exponent.real() * g.length);
    double c = dim_chi * s.abs_dim;
    if (s.selberg) c *= std::pow(1.0 - std::exp(-g.length), -2.0 * rank);
    bound += tail_bound(c, x, n_max);
  }
  return {n_max, bound};
}

struct SeriesSums {
  std::vector<cplx> values;  // one per series, coefficient applied
  double bound = 0;
  std::int64_t n_terms = 0;
};

SeriesSums sum_series(const LengthSpectrum& spec, const std::vector<Series>& series, double tail_tol) {
  if (!(tail_tol > 0)) throw DomainError("tail tolerance must be positive");
  for (const auto& g : spec.geodesics) {
    if (g.n_multiplicity != 1) {
      throw DomainError("record '" + g.id + "': Euler products take primitive geodesics only (n_multiplicity = 1)");
    }
  }
  const int rank = repkit::m_rank(spec.d);
  SeriesSums out;
  out.values.assign(series.size(), 0.0);
  if (spec.geodesics.empty()) return out;
  const double tol = tail_tol / static_cast<double>(spec.geodesics.size());
  for (const auto& g : spec.geodesics) {
    const auto [n_max, bound] = powers_needed(g, spec.dim_chi, rank, series, tol);
    out.bound += bound;
    out.n_terms += n_max;
    std::vector<cplx> chi_power(g.chi_eigenvalues.size(), 1.0);
    for (std::int64_t n = 1; n <= n_max; ++n) {
      cplx tr_chi = 0;
      for (std::size_t j = 0; j < chi_power.size(); ++j) {
        chi_power[j] *= g.chi_eigenvalues[j];
        tr_chi += chi_power[j];
      }
      const double nl = static_cast<double>(n) * g.length;
      double det = 1;
      for (double a : g.holonomy_angles) det *= std::norm(1.0 - std::polar(std::exp(-nl), n * a));
      for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        cplx term = tr_chi * table_character(s.weights, g.holonomy_angles, static_cast<int>(n)) *
                    std::exp(-s.exponent * nl) / static_cast<double>(n);
        if (s.selberg) term /= det;
        out.values[k] -= s.coefficient * term;
      }
    }
  }
  return out;
}

void check_d(const LengthSpectrum& spec, const VirtualMRep& v) {
  if (v.d != spec.d)
    throw DomainError("representation for d=" + std::to_string(v.d) + " used with d=" + std::to_string(spec.d) +
                      " length spectrum");
}

double growth(const LengthSpectrum& spec) {
  double g = 0;
  for (const auto& geo : spec.geodesics) g = std::max(g, std::log(max_modulus(geo)) / geo.length);
  return g;
}

void check_abscissa(cplx s, double abscissa, const char* what) {
  if (!(s.real() > abscissa)) {
    std::ostringstream os;
    os << what << " Euler product needs Re(s) > " << abscissa << ", got " << s.real();
    throw DivergenceError(os.str());
  }
}

ZetaEvaluation single(const LengthSpectrum& spec, const VirtualMRep& v, cplx s, double tail_tol, bool selberg) {
  check_d(spec, v);
  const double rho = repkit::m_rank(spec.d);
  const double abscissa = selberg ? selberg_abscissa(spec) : ruelle_abscissa(spec);
  check_abscissa(s, abscissa, selberg ? "Selberg" : "Ruelle");
  std::vector<Series> series{
      {weight_table(v), static_cast<double>(v.abs_dimension()), selberg ? s + rho : s, selberg, 1.0}};
  auto sums = sum_series(spec, series, tail_tol);
  return {sums.values[0], sums.bound, sums.n_terms, abscissa};
}

ZetaEvaluation combine(const ZetaEvaluation& a, const ZetaEvaluation& b, double sign) {
  return {a.value + sign * b.value, a.truncation_bound + b.truncation_bound, a.n_terms + b.n_terms,
          std::max(a.convergence_abscissa, b.convergence_abscissa)};
}

cplx alternating_determinant(const std::vector<double>& perturbed, const std::vector<double>& mu) {
  const std::size_t n = mu.size();
  Eigen::MatrixXcd c(n, n), s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c(i, j) = 2.0 * std::cos(mu[i] * perturbed[j]);
      s(i, j) = cplx(0, 2.0 * std::sin(mu[i] * perturbed[j]));
    }
  }
  return 0.5 * (c.determinant() + s.determinant());
}

}  // namespace

cplx character(const VirtualMRep& v, const std::vector<double>& angles) {
  if (angles.size() != static_cast<std::size_t>(repkit::m_rank(v.d)))
    throw DomainError("expected " + std::to_string(repkit::m_rank(v.d)) + " angles");
  return table_character(weight_table(v), angles, 1);
}

cplx weyl_character(const MIrrep& sigma, const std::vector<double>& angles) {
  const int n = repkit::m_rank(sigma.d);
  if (angles.size() != static_cast<std::size_t>(n)) throw DomainError("expected " + std::to_string(n) + " angles");
  std::vector<double> rho(n), mu(n);
  for (int i = 0; i < n; ++i) {
    rho[i] = n - 1 - i;
    mu[i] = sigma.weight.coord_double(i) + rho[i];
  }
  auto quotient = [&](double h) {
    std::vector<double> p(angles);
    for (int j = 0; j < n; ++j) p[j] += h / (j + 1.5);
    return alternating_determinant(p, mu) / alternating_determinant(p, rho);
  };
  if (std::abs(alternating_determinant(angles, rho)) > 1e-6) return quotient(0);
  constexpr double h = 1e-9;
  const cplx value = 2.0 * quotient(h) - quotient(2 * h);
  // Two or more vanishing roots leave nothing but rounding noise at this step size.
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw NumericalError("Weyl character formula is too singular at these angles");
  return value;
}

double adjoint_determinant(const PrimitiveGeodesic& g, int n) {
  double det = 1;
  for (double a : g.holonomy_angles) det *= std::norm(1.0 - std::polar(std::exp(-n * g.length), n * a));
  return det;
}

double selberg_abscissa(const LengthSpectrum& spec) { return repkit::m_rank(spec.d) + growth(spec); }

double ruelle_abscissa(const LengthSpectrum& spec) { return 2.0 * repkit::m_rank(spec.d) + growth(spec); }

ZetaEvaluation log_selberg(const LengthSpectrum& spec, const VirtualMRep& sigma, cplx s, double tail_tol) {
  return single(spec, sigma, s, tail_tol, true);
}

ZetaEvaluation log_ruelle(const LengthSpectrum& spec, const VirtualMRep& sigma, cplx s, double tail_tol) {
  return single(spec, sigma, s, tail_tol, false);
}

ZetaEvaluation log_symmetrized(const LengthSpectrum& spec, const MIrrep& sigma, cplx s, double tail_tol) {
  const auto w = repkit::weyl_action(sigma).first;
  return combine(log_selberg(spec, sigma, s, tail_tol / 2), log_selberg(spec, w, s, tail_tol / 2), 1.0);
}

ZetaEvaluation log_super_zeta(const LengthSpectrum& spec, const MIrrep& sigma, cplx s, double tail_tol) {
  const auto w = repkit::weyl_action(sigma).first;
  return combine(log_selberg(spec, sigma, s, tail_tol / 2), log_selberg(spec, w, s, tail_tol / 2), -1.0);
}

ZetaEvaluation log_super_ruelle(const LengthSpectrum& spec, const MIrrep& sigma, cplx s, double tail_tol) {
  const auto w = repkit::weyl_action(sigma).first;
  return combine(log_ruelle(spec, sigma, s, tail_tol / 2), log_ruelle(spec, w, s, tail_tol / 2), -1.0);
}

FactorizationResult ruelle_factorization(const LengthSpectrum& spec, const VirtualMRep& sigma, cplx s,
                                         double tail_tol) {
  check_d(spec, sigma);
  check_abscissa(s, ruelle_abscissa(spec), "Ruelle");
  const double rho = repkit::m_rank(spec.d);
  std::vector<Series> series;
  series.push_back({weight_table(sigma), static_cast<double>(sigma.abs_dimension()), s, false, 1.0});
  for (const auto& ext : repkit::exterior_powers_of_n(spec.d)) {
    const VirtualMRep v = repkit::tensor(ext.rep, sigma);
    // Z(s + rho - lambda) carries e^{-(s + rho - lambda + rho) n l}
    series.push_back({weight_table(v), static_cast<double>(v.abs_dimension()), s + 2.0 * rho - double(ext.shift),
                      true, ext.p % 2 == 0 ? 1.0 : -1.0});
  }
  auto sums = sum_series(spec, series, tail_tol);
  FactorizationResult out;
  out.log_ruelle = sums.values[0];
  for (std::size_t k = 1; k < sums.values.size(); ++k) out.log_product += sums.values[k];
  out.residual = std::abs(out.log_ruelle - out.log_product);
  out.truncation_bound = sums.bound;
  return out;
}

double ruelle_factorization_residual(const LengthSpectrum& spec, const VirtualMRep& sigma, cplx s, double tail_tol) {
  return ruelle_factorization(spec, sigma, s, tail_tol).residual;
}

cplx resummed_log_factor(const Eigen::MatrixXcd& B, const Eigen::MatrixXcd& C, cplx q, double tol) {
  const Eigen::VectorXcd b = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(B, false).eigenvalues();
  const Eigen::VectorXcd c = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(C, false).eigenvalues();
  double beta = 0, gamma = 0;
  for (Eigen::Index i = 0; i < b.size(); ++i) beta = std::max(beta, std::abs(b[i]));
  for (Eigen::Index i = 0; i < c.size(); ++i) gamma = std::max(gamma, std::abs(c[i]));
  if (!(gamma < 1)) throw DomainError("C must have spectral radius below 1");
  const double x = std::abs(q) * beta;
  if (!(x < 1)) throw DivergenceError("|q| times the spectral radius of B must be below 1");
  const double cst = static_cast<double>(b.size()) * std::pow(1.0 - gamma, -static_cast<double>(c.size()));
  std::int64_t n_max = 0;
  while (tail_bound(cst, x, n_max) > tol) {
    if (++n_max > kMaxPowers) throw TruncationError("resummation tail not reached", tail_bound(cst, x, kMaxPowers));
  }
  std::vector<cplx> bp(b.size(), 1.0), cp(c.size(), 1.0);
  cplx qn = 1.0, sum = 0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    qn *= q;
    cplx tr = 0, det = 1;
    for (std::size_t i = 0; i < bp.size(); ++i) tr += (bp[i] *= b[i]);
    for (std::size_t i = 0; i < cp.size(); ++i) det *= 1.0 - (cp[i] *= c[i]);
    sum -= qn * tr / (static_cast<double>(n) * det);
  }
  return sum;
}

}  // namespace dynzeta::zetafun
