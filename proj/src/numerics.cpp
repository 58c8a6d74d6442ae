#include "dynzeta/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dynzeta/errors.hpp"

namespace dynzeta::numerics {

namespace {

constexpr double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

void check_error(double err, double scale, double tol, const char* where) {
  if (!std::isfinite(err) || err > 100.0 * tol * std::max(1.0, scale)) {
    std::ostringstream os;
    os << "quadrature on " << where << " did not converge: error estimate " << err << ", tolerance " << tol;
    throw NumericalError(os.str());
  }
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.real() < 0.5) {
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

cplx integrate_finite(const std::function<cplx(double)>& f, double a, double b, double tol) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0, l1 = 0;
  cplx r = ts.integrate(f, a, b, tol, &err, &l1);
  check_error(err, l1, tol, "a finite interval");
  return r;
}

cplx integrate_to_infinity(const std::function<cplx(double)>& f, double a, double tol) {
  static thread_local boost::math::quadrature::exp_sinh<double> es;
  double err = 0, l1 = 0;
  cplx r = es.integrate(f, a, std::numeric_limits<double>::infinity(), tol, &err, &l1);
  check_error(err, l1, tol, "a half-infinite interval");
  return r;
}

cplx integrate_half_line(const std::function<cplx(double)>& f, double tol) {
  return integrate_finite(f, 0.0, 1.0, tol) + integrate_to_infinity(f, 1.0, tol);
}

}  // namespace dynzeta::numerics
