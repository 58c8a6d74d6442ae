#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dynzeta/geodata.hpp"
#include "dynzeta/repkit.hpp"

namespace dynzeta::zetafun {

using cplx = std::complex<double>;
using repkit::MIrrep;
using repkit::VirtualMRep;

struct ZetaEvaluation {
  cplx value;                   // log of the zeta function
  double truncation_bound = 0;  // bound on the dropped tail
  std::int64_t n_terms = 0;
  double convergence_abscissa = 0;
};

/// tr v(m) for m in the maximal torus with rotation angles `angles` on the
/// (d-1)-plane, summed over the weight diagram. Angles are used as given, so
/// for spin representations they fix the lift to Spin(d-1).
cplx character(const VirtualMRep& v, const std::vector<double>& angles);

/// Weyl character formula, with singular angle configurations handled by a
/// 1e-9 perturbation and Richardson extrapolation. Used as a cross-check.
cplx weyl_character(const MIrrep& sigma, const std::vector<double>& angles);

/// det(I - Ad(m^n a^n)) on the (d-1)-plane: prod_j |1 - e^{-n l} e^{i n theta_j}|^2.
double adjoint_determinant(const geodata::PrimitiveGeodesic& g, int n);

double selberg_abscissa(const geodata::LengthSpectrum& spec);
double ruelle_abscissa(const geodata::LengthSpectrum& spec);

ZetaEvaluation log_selberg(const geodata::LengthSpectrum& spec, const VirtualMRep& sigma, cplx s, double tail_tol);
ZetaEvaluation log_ruelle(const geodata::LengthSpectrum& spec, const VirtualMRep& sigma, cplx s, double tail_tol);
/// log Z(s; sigma) + log Z(s; w sigma)
ZetaEvaluation log_symmetrized(const geodata::LengthSpectrum& spec, const MIrrep& sigma, cplx s, double tail_tol);
/// log Z(s; sigma) - log Z(s; w sigma)
ZetaEvaluation log_super_zeta(const geodata::LengthSpectrum& spec, const MIrrep& sigma, cplx s, double tail_tol);
/// log R(s; sigma) - log R(s; w sigma)
ZetaEvaluation log_super_ruelle(const geodata::LengthSpectrum& spec, const MIrrep& sigma, cplx s, double tail_tol);

struct FactorizationResult {
  double residual = 0;
  double truncation_bound = 0;  // sum of the bounds of every evaluated term
  cplx log_ruelle;
  cplx log_product;
};

/// Compares log R(s) with sum_p (-1)^p log Z(s + rho - lambda_p; psi_p (x) sigma).
/// All terms are summed over one common set of geodesic powers, sized for
/// the slowest-converging factor.
FactorizationResult ruelle_factorization(const geodata::LengthSpectrum& spec, const VirtualMRep& sigma, cplx s,
                                         double tail_tol);
double ruelle_factorization_residual(const geodata::LengthSpectrum& spec, const VirtualMRep& sigma, cplx s,
                                     double tail_tol);

/// -sum_n q^n tr(B^n) / (n det(I - C^n)), the logarithm of
/// prod_{k>=0} det(I - q B (x) S^k C), truncated once the tail is below tol.
cplx resummed_log_factor(const Eigen::MatrixXcd& B, const Eigen::MatrixXcd& C, cplx q, double tol);

}  // namespace dynzeta::zetafun
