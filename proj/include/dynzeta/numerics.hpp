#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>

namespace dynzeta::numerics {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// log Gamma for complex arguments (Lanczos, g = 7), with reflection for Re z < 1/2.
/// The imaginary part is not normalized to any particular branch.
cplx log_gamma(cplx z);
cplx gamma(cplx z);

/// Portable uniform doubles from a seeded 64-bit Mersenne twister.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  std::int64_t integer(std::int64_t lo, std::int64_t hi);  // inclusive

 private:
  std::mt19937_64 engine_;  // output sequence is fixed by the standard
};

/// Double-exponential quadrature; throws NumericalError when the error
/// estimate misses `tol` by more than a factor 100.
cplx integrate_finite(const std::function<cplx(double)>& f, double a, double b, double tol);
cplx integrate_to_infinity(const std::function<cplx(double)>& f, double a, double tol);
/// (0,1] by tanh-sinh plus [1,inf) by exp-sinh.
cplx integrate_half_line(const std::function<cplx(double)>& f, double tol);

}  // namespace dynzeta::numerics
