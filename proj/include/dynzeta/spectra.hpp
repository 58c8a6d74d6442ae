#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dynzeta/geodata.hpp"

namespace dynzeta::spectra {

using cplx = std::complex<double>;
using geodata::OperatorSpectrum;

/// Small-time heat-trace coefficients: theta(t) ~ sum_j a_j t^{j - d/2}.
struct AsymptoticExpansion {
  int d = 3;
  std::vector<double> coeffs;
  int dim_chi_factor = 1;
};

struct AgmonAngle {
  double theta = 0;    // in [0, 2 pi)
  double epsilon = 0;  // angular clearance to the nearest eigenvalue
};

/// Angular distance from the ray at angle theta to the nearest eigenvalue.
double clearance(const OperatorSpectrum& spec, double theta);
/// Bisectors of the gaps between consecutive eigenvalue arguments, best first.
std::vector<AgmonAngle> agmon_candidates(const OperatorSpectrum& spec);
AgmonAngle choose_agmon_angle(const OperatorSpectrum& spec);
/// Validates theta against the spectrum; throws DomainError if a point lies on the ray.
AgmonAngle make_agmon_angle(const OperatorSpectrum& spec, double theta);

/// log with arg in (theta - 2 pi, theta].
cplx log_theta(cplx z, double theta);

cplx theta_trace(const OperatorSpectrum& spec, double t);
std::int64_t counting_function(const OperatorSpectrum& spec, double c);

struct WeylFit {
  double K = 0;           // leading constant
  double c_max = 0;       // largest modulus in the spectrum
  double ratio_at_max = 0;
  double min_ratio = 0;   // over the top decile of sorted moduli
  double max_ratio = 0;
};
WeylFit weyl_law_fit(const OperatorSpectrum& spec, int d, double rank_bundle, double vol);

struct EtaValue {
  cplx eta, eta0, eta1;  // eta = eta0 + eta1, eta0 from the entries with Re(lambda^2) <= 0
};
EtaValue eta_function(const OperatorSpectrum& spec, const AgmonAngle& theta, cplx s);

struct EtaResult {
  std::vector<std::pair<cplx, cplx>> value_at;
  cplx eta0;
  cplx eta_invariant;
};
EtaResult eta_result(const OperatorSpectrum& spec, const AgmonAngle& theta, const std::vector<cplx>& s_grid);

/// (# Re > 0) - (# Re < 0), with multiplicities.
std::int64_t eta_invariant(const OperatorSpectrum& spec);

/// Gamma((s+1)/2)^{-1} int_0^inf Tr(Pi_+ D e^{-t D^2}) t^{(s-1)/2} dt by quadrature.
cplx mellin_eta_term(const OperatorSpectrum& spec, cplx s, double tol);
double eta_split_identity_residual(const OperatorSpectrum& spec, const AgmonAngle& theta,
                                   const std::vector<cplx>& s_grid, double tol = 1e-12);

enum class XiMode { finite, hybrid };

/// I(a, mu) = int_0^1 e^{-mu t} t^{a-1} dt, meromorphic in a with poles at 0, -1, -2, ...
cplx lower_incomplete_unit(cplx a, cplx mu, double tol = 1e-13);

cplx xi_function(const OperatorSpectrum& spec, const AsymptoticExpansion& asym, cplx z, cplx s,
                 XiMode mode = XiMode::finite);
/// Residue of the hybrid xi function at z = d/2 - j.
cplx xi_residue(const AsymptoticExpansion& asym, int j, cplx s);

struct Determinant {
  cplx value;
  cplx log_value;           // sum of principal logs
  std::int64_t winding = 0;  // (log_value - principal log(value)) / 2 pi i
};
Determinant regularized_determinant(const OperatorSpectrum& spec, cplx s);

/// Built-in model spectra "riemann" (lambda_k = k, k >= 1) and "harmonic"
/// (lambda_k = k + 1/2, k >= 0), regularized in closed form.
cplx model_determinant(const std::string& model, cplx s);
bool is_model(const std::string& name);

/// log det_theta = sum m log_theta(lambda).
cplx log_det_theta(const OperatorSpectrum& spec, double theta);
cplx graded_determinant(const OperatorSpectrum& plus, const OperatorSpectrum& minus, const AgmonAngle& theta);
cplx graded_determinant(const OperatorSpectrum& plus, const OperatorSpectrum& minus, double theta);

struct Thm75Result {
  cplx det_gr;
  cplx rhs;
  cplx xi;
  std::int64_t eta = 0;
  double residual = 0;  // |det_gr - rhs| / max(1, |det_gr|)
};
/// theta must lie in (-pi/2, 0) (or the same ray in [0, 2 pi)).
Thm75Result thm75(const OperatorSpectrum& plus, const OperatorSpectrum& minus, double theta);
double thm75_residual(const OperatorSpectrum& plus, const OperatorSpectrum& minus, double theta);

double rs_torsion(const std::vector<OperatorSpectrum>& laplace_spectra, int d);
cplx refined_torsion(const OperatorSpectrum& plus, const OperatorSpectrum& minus, double theta, double eta_triv,
                     int rank, int d);

}  // namespace dynzeta::spectra
