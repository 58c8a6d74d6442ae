#include "dynzeta/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dynzeta/errors.hpp"
#include "dynzeta/numerics.hpp"

namespace dynzeta::spectra {

using numerics::kPi;

namespace {

constexpr double kTwoPi = 2 * kPi;

double wrap(double a) {
  double x = std::fmod(a, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x;
}

double angular_distance(double a, double b) {
  const double x = wrap(a - b);
  return std::min(x, kTwoPi - x);
}

void reject_zero(const OperatorSpectrum& spec) {
  for (const auto& e : spec.entries)
    if (e.lambda == 0.0) throw DomainError("0 is an eigenvalue of '" + spec.label + "'");
}

void reject_imaginary_axis(const OperatorSpectrum& spec) {
  for (const auto& e : spec.entries) {
    if (e.lambda.real() == 0.0) {
      std::ostringstream os;
      os << "eigenvalue " << e.lambda << " of '" << spec.label << "' lies on the imaginary axis";
      throw DomainError(os.str());
    }
  }
}

bool is_pole_of_gamma(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

double clearance(const OperatorSpectrum& spec, double theta) {
  double c = kPi;
  for (const auto& e : spec.entries) c = std::min(c, angular_distance(std::arg(e.lambda), theta));
  return c;
}

std::vector<AgmonAngle> agmon_candidates(const OperatorSpectrum& spec) {
  reject_zero(spec);
  std::vector<double> args;
  for (const auto& e : spec.entries) args.push_back(wrap(std::arg(e.lambda)));
  std::sort(args.begin(), args.end());
  args.erase(std::unique(args.begin(), args.end()), args.end());
  std::vector<AgmonAngle> out;
  if (args.empty()) return {AgmonAngle{kPi, kPi}};
  for (std::size_t i = 0; i < args.size(); ++i) {
    const double lo = args[i];
    const double hi = i + 1 < args.size() ? args[i + 1] : args[0] + kTwoPi;
    if (hi - lo <= 0) continue;
    out.push_back({wrap(0.5 * (lo + hi)), 0.5 * (hi - lo)});
  }
  std::stable_sort(out.begin(), out.end(), [](const AgmonAngle& a, const AgmonAngle& b) {
    if (a.epsilon != b.epsilon) return a.epsilon > b.epsilon;
    return a.theta < b.theta;
  });
  return out;
}

AgmonAngle choose_agmon_angle(const OperatorSpectrum& spec) { return agmon_candidates(spec).front(); }

AgmonAngle make_agmon_angle(const OperatorSpectrum& spec, double theta) {
  reject_zero(spec);
  const double c = clearance(spec, theta);
  if (!(c > 0)) {
    std::ostringstream os;
    os << "the ray at angle " << theta << " meets the spectrum of '" << spec.label << "'";
    throw DomainError(os.str());
  }
  return {wrap(theta), c};
}

cplx log_theta(cplx z, double theta) {
  if (z == 0.0) throw DomainError("log of 0");
  double a = std::arg(z);
  a -= kTwoPi * std::ceil((a - theta) / kTwoPi);
  return {std::log(std::abs(z)), a};
}

cplx theta_trace(const OperatorSpectrum& spec, double t) {
  if (!(t > 0)) throw DomainError("theta trace needs t > 0");
  cplx sum = 0;
  for (const auto& e : spec.entries) sum += static_cast<double>(e.mult) * std::exp(-t * e.lambda);
  return sum;
}

std::int64_t counting_function(const OperatorSpectrum& spec, double c) {
  std::int64_t n = 0;
  for (const auto& e : spec.entries)
    if (std::abs(e.lambda) <= c) n += e.mult;
  return n;
}

WeylFit weyl_law_fit(const OperatorSpectrum& spec, int d, double rank_bundle, double vol) {
  WeylFit fit;
  fit.K = geodata::weyl_constant(d, rank_bundle, vol);
  if (spec.entries.empty()) return fit;
  std::vector<double> moduli;
  for (const auto& e : spec.entries) moduli.push_back(std::abs(e.lambda));
  std::sort(moduli.begin(), moduli.end());
  const std::size_t first = moduli.size() - std::max<std::size_t>(1, moduli.size() / 10);
  fit.min_ratio = 1e300;
  fit.max_ratio = 0;
  for (std::size_t i = first; i < moduli.size(); ++i) {
    const double c = moduli[i];
    const double r = counting_function(spec, c) / (fit.K * std::pow(c, 0.5 * d));
    fit.min_ratio = std::min(fit.min_ratio, r);
    fit.max_ratio = std::max(fit.max_ratio, r);
  }
  fit.c_max = moduli.back();
  fit.ratio_at_max = counting_function(spec, fit.c_max) / (fit.K * std::pow(fit.c_max, 0.5 * d));
  return fit;
}

EtaValue eta_function(const OperatorSpectrum& spec, const AgmonAngle& theta, cplx s) {
  reject_zero(spec);
  reject_imaginary_axis(spec);
  EtaValue v{0, 0, 0};
  for (const auto& e : spec.entries) {
    const bool positive = e.lambda.real() > 0;
    const cplx base = positive ? e.lambda : -e.lambda;
    const cplx term = (positive ? 1.0 : -1.0) * static_cast<double>(e.mult) * std::exp(-s * log_theta(base, theta.theta));
    if ((e.lambda * e.lambda).real() <= 0) {
      v.eta0 += term;
    } else {
      v.eta1 += term;
    }
  }
  v.eta = v.eta0 + v.eta1;
  return v;
}

EtaResult eta_result(const OperatorSpectrum& spec, const AgmonAngle& theta, const std::vector<cplx>& s_grid) {
  EtaResult r;
  for (cplx s : s_grid) r.value_at.emplace_back(s, eta_function(spec, theta, s).eta);
  const auto at0 = eta_function(spec, theta, 0.0);
  r.eta0 = at0.eta0;
  r.eta_invariant = at0.eta;
  return r;
}

std::int64_t eta_invariant(const OperatorSpectrum& spec) {
  reject_zero(spec);
  reject_imaginary_axis(spec);
  std::int64_t n = 0;
  for (const auto& e : spec.entries) n += e.lambda.real() > 0 ? e.mult : -e.mult;
  return n;
}

cplx mellin_eta_term(const OperatorSpectrum& spec, cplx s, double tol) {
  if (!(s.real() > 0)) throw DomainError("the Mellin representation needs Re(s) > 0");
  std::vector<geodata::SpectralEntry> plus;
  for (const auto& e : spec.entries)
    if ((e.lambda * e.lambda).real() > 0) plus.push_back(e);
  if (plus.empty()) return 0.0;
  const cplx power = 0.5 * (s - 1.0);
  auto integrand = [&](double t) -> cplx {
    if (t <= 0) return 0.0;
    cplx tr = 0;
    for (const auto& e : plus) tr += static_cast<double>(e.mult) * e.lambda * std::exp(-t * e.lambda * e.lambda);
    return tr * std::exp(power * std::log(t));
  };
  return numerics::integrate_half_line(integrand, tol) / numerics::gamma(0.5 * (s + 1.0));
}

double eta_split_identity_residual(const OperatorSpectrum& spec, const AgmonAngle& theta,
                                   const std::vector<cplx>& s_grid, double tol) {
  // The Mellin side is built from principal powers, so the theta branch must
  // agree with the principal one on every Pi_+ term.
  for (const auto& e : spec.entries) {
    if ((e.lambda * e.lambda).real() <= 0) continue;
    const cplx base = e.lambda.real() > 0 ? e.lambda : -e.lambda;
    if (std::abs(log_theta(base, theta.theta) - std::log(base)) > 1e-12) {
      std::ostringstream os;
      os << "Agmon angle " << theta.theta << " puts " << base << " on a non-principal branch";
      throw DomainError(os.str());
    }
  }
  double worst = 0;
  for (cplx s : s_grid) {
    const auto eta = eta_function(spec, theta, s);
    worst = std::max(worst, std::abs(eta.eta - eta.eta0 - mellin_eta_term(spec, s, tol)));
  }
  return worst;
}

cplx lower_incomplete_unit(cplx a, cplx mu, double tol) {
  // Subtract the first K Taylor terms of e^{-mu t} so the remainder is integrable.
  const int K = std::max(0, static_cast<int>(std::ceil(-a.real())) + 1);
  cplx head = 0, coef = 1.0;
  for (int k = 0; k < K; ++k) {
    if (k > 0) coef *= -mu / static_cast<double>(k);
    const cplx pole = a + static_cast<double>(k);
    if (pole == 0.0) throw DomainError("I(a, mu) has a pole at this a");
    head += coef / pole;
  }
  // For small |mu t| the remainder is (-mu)^K/K! t^K S(t) with S = sum_j x^j K!/(K+j)!,
  // folded into one power of t so nothing overflows near 0.
  cplx lead = 1.0;
  for (int k = 1; k <= K; ++k) lead *= -mu / static_cast<double>(k);
  auto remainder = [&](double t) -> cplx {
    if (t <= 0) return 0.0;
    const cplx x = -mu * t;
    if (std::abs(x) < 2.0) {
      cplx series = 0, term = 1.0;
      for (int j = 0; j < 80; ++j) {
        series += term;
        if (std::abs(term) < 1e-18 * std::abs(series)) break;
        term *= x / static_cast<double>(K + j + 1);
      }
      return lead * series * std::exp((a + static_cast<double>(K) - 1.0) * std::log(t));
    }
    cplx partial = 0, term = 1.0;
    for (int k = 0; k < K; ++k) {
      partial += term;
      term *= x / static_cast<double>(k + 1);
    }
    return (std::exp(x) - partial) * std::exp((a - 1.0) * std::log(t));
  };
  return head + numerics::integrate_finite(remainder, 0.0, 1.0, tol);
}

cplx xi_function(const OperatorSpectrum& spec, const AsymptoticExpansion& asym, cplx z, cplx s, XiMode mode) {
  const cplx s2 = s * s;
  if (is_pole_of_gamma(z)) throw DomainError("xi has a pole at this z");
  cplx sum = 0;
  const cplx g = numerics::gamma(z);
  for (const auto& e : spec.entries) {
    const cplx shifted = e.lambda + s2;
    if (!(shifted.real() > 0)) {
      std::ostringstream os;
      os << "Re(lambda + s^2) <= 0 for lambda = " << e.lambda << ": the Mellin integral diverges";
      throw DomainError(os.str());
    }
    sum += static_cast<double>(e.mult) * g * std::exp(-z * std::log(shifted));
  }
  if (mode == XiMode::finite) return sum;
  for (std::size_t j = 0; j < asym.coeffs.size(); ++j) {
    if (asym.coeffs[j] == 0) continue;
    sum += asym.coeffs[j] * lower_incomplete_unit(static_cast<double>(j) - 0.5 * asym.d + z, s2);
  }
  return sum;
}

cplx xi_residue(const AsymptoticExpansion& asym, int j, cplx s) {
  const cplx s2 = s * s;
  cplx res = 0, coef = 1.0;  // (-s^2)^k / k!
  for (int k = 0; k <= j; ++k) {
    if (k > 0) coef *= -s2 / static_cast<double>(k);
    const int i = j - k;
    if (i < static_cast<int>(asym.coeffs.size())) res += asym.coeffs[i] * coef;
  }
  return res;
}

Determinant regularized_determinant(const OperatorSpectrum& spec, cplx s) {
  const cplx s2 = s * s;
  Determinant d{1.0, 0.0, 0};
  for (const auto& e : spec.entries) {
    const cplx shifted = e.lambda + s2;
    if (shifted == 0.0) {
      std::ostringstream os;
      os << "lambda + s^2 = 0 for lambda = " << e.lambda;
      throw SingularDeterminantError(os.str());
    }
    d.log_value += static_cast<double>(e.mult) * std::log(shifted);
  }
  d.value = std::exp(d.log_value);
  d.winding = std::llround((d.log_value.imag() - std::arg(d.value)) / kTwoPi);
  return d;
}

bool is_model(const std::string& name) { return name == "riemann" || name == "harmonic"; }

cplx model_determinant(const std::string& model, cplx s) {
  // zeta_H'(0, a) = log Gamma(a) - log(2 pi)/2, so det = sqrt(2 pi) / Gamma(a).
  cplx a;
  if (model == "riemann") {
    a = 1.0 + s * s;
  } else if (model == "harmonic") {
    a = 0.5 + s * s;
  } else {
    throw DomainError("unknown model spectrum '" + model + "'");
  }
  if (is_pole_of_gamma(a)) throw SingularDeterminantError("model determinant vanishes at this s");
  return std::exp(0.5 * std::log(kTwoPi) - numerics::log_gamma(a));
}

cplx log_det_theta(const OperatorSpectrum& spec, double theta) {
  reject_zero(spec);
  cplx sum = 0;
  for (const auto& e : spec.entries) sum += static_cast<double>(e.mult) * log_theta(e.lambda, theta);
  return sum;
}

cplx graded_determinant(const OperatorSpectrum& plus, const OperatorSpectrum& minus, double theta) {
  if (!(clearance(plus, theta) > 0) || !(clearance(minus, theta) > 0))
    throw DomainError("the Agmon ray meets the spectrum");
  return std::exp(log_det_theta(plus, theta) - log_det_theta(minus, theta));
}

cplx graded_determinant(const OperatorSpectrum& plus, const OperatorSpectrum& minus, const AgmonAngle& theta) {
  return graded_determinant(plus, minus, theta.theta);
}

Thm75Result thm75(const OperatorSpectrum& plus, const OperatorSpectrum& minus, double theta) {
  double th = std::fmod(theta, kTwoPi);
  if (th > kPi) th -= kTwoPi;
  if (th < -kPi) th += kTwoPi;
  if (!(th > -kPi / 2 && th < 0)) throw DomainError("the graded determinant identity needs an Agmon angle in (-pi/2, 0)");
  std::int64_t left = 0;
  for (const auto* spec : {&plus, &minus}) {
    reject_zero(*spec);
    reject_imaginary_axis(*spec);
    for (const auto& e : spec->entries) {
      const double a = std::arg(e.lambda);
      if ((a > -kPi / 2 && a <= th) || (a > kPi / 2 && a <= th + kPi)) {
        std::ostringstream os;
        os << "winding mismatch: " << e.lambda << " lies between the Agmon line and the imaginary axis";
        throw BranchError(os.str());
      }
      if (e.lambda.real() < 0) left += e.mult;
    }
  }
  if (left % 2 != 0) {
    throw BranchError("winding mismatch: " + std::to_string(left) +
                      " eigenvalues in the left half-plane give an odd half-turn count");
  }
  Thm75Result r;
  r.det_gr = graded_determinant(plus, minus, th);
  auto half_log_squares = [&](const OperatorSpectrum& spec) {
    cplx sum = 0;
    for (const auto& e : spec.entries) sum += static_cast<double>(e.mult) * log_theta(e.lambda * e.lambda, 2 * th);
    return 0.5 * sum;
  };
  r.xi = half_log_squares(plus) - half_log_squares(minus);
  r.eta = eta_invariant(plus) + eta_invariant(minus);
  r.rhs = std::exp(r.xi - cplx(0, kPi * static_cast<double>(r.eta)));
  // Both sides are products of many factors; rounding scales with their size.
  r.residual = std::abs(r.det_gr - r.rhs) / std::max(1.0, std::abs(r.det_gr));
  return r;
}

double thm75_residual(const OperatorSpectrum& plus, const OperatorSpectrum& minus, double theta) {
  return thm75(plus, minus, theta).residual;
}

double rs_torsion(const std::vector<OperatorSpectrum>& laplace_spectra, int d) {
  if (laplace_spectra.size() != static_cast<std::size_t>(d + 1))
    throw DomainError("expected " + std::to_string(d + 1) + " Laplace spectra (degrees 0..d)");
  double log_t = 0;
  for (int p = 0; p <= d; ++p) {
    double log_det = 0;
    for (const auto& e : laplace_spectra[p].entries) {
      if (e.lambda.imag() != 0 || !(e.lambda.real() > 0)) {
        std::ostringstream os;
        os << "Laplace eigenvalue " << e.lambda << " in degree " << p << " is not positive";
        throw DomainError(os.str());
      }
      log_det += static_cast<double>(e.mult) * std::log(e.lambda.real());
    }
    log_t += -0.5 * p * (p % 2 == 0 ? 1.0 : -1.0) * log_det;
  }
  return std::exp(log_t);
}

cplx refined_torsion(const OperatorSpectrum& plus, const OperatorSpectrum& minus, double theta, double eta_triv,
                     int rank, int d) {
  if (d < 3 || d % 2 == 0) throw DomainError("d must be odd and >= 3");
  return graded_determinant(plus, minus, theta) * std::exp(cplx(0, kPi * rank * eta_triv));
}

}  // namespace dynzeta::spectra
