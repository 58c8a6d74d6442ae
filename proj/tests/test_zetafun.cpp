#include <cmath>

#include "doctest.h"
#include "dynzeta/errors.hpp"
#include "dynzeta/zetafun.hpp"
#include "oracles.hpp"

using namespace dynzeta;
using namespace dynzeta::zetafun;
using geodata::LengthSpectrum;
using geodata::PrimitiveGeodesic;
using numerics::kPi;
using repkit::Weight;

namespace {
LengthSpectrum single_geodesic(int d, double length, std::vector<double> angles, std::vector<cplx> chi) {
  LengthSpectrum spec;
  spec.d = d;
  spec.dim_chi = static_cast<int>(chi.size());
  spec.geodesics.push_back(PrimitiveGeodesic{"g1", length, std::move(angles), std::move(chi), 1});
  return spec;
}

MIrrep trivial(int d) { return repkit::trivial_mirrep(d); }
}  // namespace

TEST_CASE("Selberg and Ruelle values for a single geodesic") {
  auto spec = single_geodesic(3, 1.0, {0.0}, {1.0});
  double oracle = 0;
  for (int n = 1; n < 400; ++n) oracle -= std::exp(-4.0 * n) / (n * std::pow(1 - std::exp(-1.0 * n), 2));
  auto z = log_selberg(spec, trivial(3), 3.0, 1e-14);
  CHECK(std::abs(z.value - oracle) < 1e-12);
  CHECK(z.truncation_bound <= 1e-14);
  CHECK(z.convergence_abscissa == 1.0);

  auto r = log_ruelle(spec, trivial(3), 3.0, 1e-14);
  CHECK(std::abs(r.value - std::log(1 - std::exp(-3.0))) < 1e-13);
  CHECK(r.value.real() == doctest::Approx(-0.051069).epsilon(1e-4));
  CHECK(r.convergence_abscissa == 2.0);

  CHECK(std::abs(log_selberg(spec, trivial(3), 60.0, 1e-12).value) < 1e-20);
  CHECK(std::abs(log_ruelle(spec, trivial(3), 60.0, 1e-12).value) < 1e-20);
}

TEST_CASE("trace linearity in chi") {
  auto one = single_geodesic(3, 0.8, {0.4}, {1.0});
  auto two = single_geodesic(3, 0.8, {0.4}, {1.0, 1.0});
  auto r1 = log_ruelle(one, trivial(3), 3.0, 1e-14).value;
  auto r2 = log_ruelle(two, trivial(3), 3.0, 1e-14).value;
  CHECK(std::abs(r2 - 2.0 * r1) < 1e-14);
}

TEST_CASE("Weyl flip on trivial holonomy") {
  auto spec = geodata::synthesize_length_spectrum(3, 6, 5, 2, true);
  for (auto& g : spec.geodesics) g.holonomy_angles.assign(2, 0.0);
  MIrrep s{5, Weight::integral({1, 1})};
  auto w = repkit::weyl_action(s).first;
  const cplx at = 7.0;
  CHECK(std::abs(log_selberg(spec, s, at, 1e-13).value - log_selberg(spec, w, at, 1e-13).value) < 1e-14);
  CHECK(std::abs(log_symmetrized(spec, s, at, 1e-13).value - 2.0 * log_selberg(spec, s, at, 1e-13).value) < 1e-13);
  CHECK(std::abs(log_super_zeta(spec, s, at, 1e-13).value) < 1e-14);
}

TEST_CASE("symmetrized and super zeta") {
  auto spec = geodata::synthesize_length_spectrum(4, 8, 5, 2, false);
  const cplx at(6.5, 1.0);
  MIrrep inv{5, Weight::integral({1, 0})};
  CHECK(std::abs(log_symmetrized(spec, inv, at, 1e-12).value - 2.0 * log_selberg(spec, inv, at, 1e-12).value) < 1e-12);
  CHECK(std::abs(log_super_zeta(spec, inv, at, 1e-12).value) < 1e-14);

  MIrrep s{5, Weight::integral({1, 1})};
  MIrrep w{5, Weight::integral({1, -1})};
  const cplx zs = log_selberg(spec, s, at, 1e-14).value;
  const cplx zw = log_selberg(spec, w, at, 1e-14).value;
  CHECK(std::abs(zs - zw) > 1e-6);  // the flip is visible on this data
  CHECK(std::abs(log_symmetrized(spec, s, at, 1e-14).value - (zs + zw)) < 1e-12);
  CHECK(std::abs(log_super_zeta(spec, s, at, 1e-14).value - (zs - zw)) < 1e-12);
  CHECK(std::abs(log_super_zeta(spec, s, at, 1e-13).value + log_super_zeta(spec, w, at, 1e-13).value) < 1e-14);

  const cplx rs = log_ruelle(spec, s, at + 3.0, 1e-14).value;
  const cplx rw = log_ruelle(spec, w, at + 3.0, 1e-14).value;
  CHECK(std::abs(log_super_ruelle(spec, s, at + 3.0, 1e-14).value - (rs - rw)) < 1e-12);
}

TEST_CASE("Ruelle factorization") {
  auto single = single_geodesic(3, 1.0, {0.9}, {1.0});
  auto f = ruelle_factorization(single, trivial(3), 5.0, 1e-14);
  CHECK(f.residual < 1e-12);
  CHECK(std::abs(f.log_ruelle) > 1e-4);

  auto spec = geodata::synthesize_length_spectrum(17, 10, 5, 2, false);
  for (const auto& s : {trivial(5), MIrrep{5, Weight::integral({1, 1})}, MIrrep{5, Weight::parse("1/2,-1/2")}}) {
    const cplx at = ruelle_abscissa(spec) + 2.0;
    auto r = ruelle_factorization(spec, s, cplx(at.real(), 0.7), 1e-12);
    CHECK(r.residual < 1e-10);
    CHECK(r.residual <= r.truncation_bound + 1e-13);
  }
  CHECK(ruelle_factorization_residual(spec, trivial(5), 8.0 + ruelle_abscissa(spec), 1e-12) < 1e-10);

  LengthSpectrum empty;
  CHECK(ruelle_factorization_residual(empty, trivial(3), 5.0, 1e-12) == 0.0);
  CHECK(log_ruelle(empty, trivial(3), 5.0, 1e-12).value == 0.0);
}

TEST_CASE("truncation control") {
  auto spec = geodata::synthesize_length_spectrum(5, 7, 3, 1, false);
  const cplx at = selberg_abscissa(spec) + 0.5;
  std::int64_t previous = -1;
  for (double tol : {1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-3}) {
    auto z = log_selberg(spec, trivial(3), at, tol);
    CHECK(z.truncation_bound <= tol);
    if (previous >= 0) CHECK(z.n_terms <= previous);
    previous = z.n_terms;
  }
  // the reported bound covers the actual tail
  auto coarse = log_selberg(spec, trivial(3), at, 1e-4);
  auto fine = log_selberg(spec, trivial(3), at, 1e-15);
  CHECK(std::abs(coarse.value - fine.value) <= coarse.truncation_bound + 1e-15);

  CHECK_THROWS_AS(log_selberg(spec, trivial(3), selberg_abscissa(spec) - 0.1, 1e-10), DivergenceError);
  CHECK_THROWS_AS(log_ruelle(spec, trivial(3), ruelle_abscissa(spec), 1e-10), DivergenceError);
  try {
    log_selberg(single_geodesic(3, 1e-6, {0.1}, {1.0}), trivial(3), 2.0, 1e-15);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.achieved_bound > 1e-15);
  }
  CHECK_THROWS_AS(log_selberg(spec, MIrrep{5, Weight::integral({0, 0})}, 5.0, 1e-10), DomainError);
  spec.geodesics[0].n_multiplicity = 2;
  CHECK_THROWS_AS(log_selberg(spec, trivial(3), 5.0, 1e-10), DomainError);
}

TEST_CASE("conjugation symmetry for real data") {
  auto spec = geodata::synthesize_length_spectrum(21, 6, 5, 1, true);
  spec.dim_chi = 2;
  for (auto& g : spec.geodesics) g.chi_eigenvalues = {g.chi_eigenvalues[0] * 1.3, std::conj(g.chi_eigenvalues[0]) * 1.3};
  const double a = ruelle_abscissa(spec) + 1.0;
  for (const auto& s : {trivial(5), MIrrep{5, Weight::integral({1, 0})}}) {
    const cplx z = log_selberg(spec, s, cplx(a, 1.7), 1e-13).value;
    const cplx zb = log_selberg(spec, s, cplx(a, -1.7), 1e-13).value;
    CHECK(std::abs(zb - std::conj(z)) < 1e-13);
    const cplx r = log_ruelle(spec, s, cplx(a, 0.4), 1e-13).value;
    const cplx rb = log_ruelle(spec, s, cplx(a, -0.4), 1e-13).value;
    CHECK(std::abs(rb - std::conj(r)) < 1e-13);
  }
}

TEST_CASE("characters: weight sums against the Weyl character formula") {
  numerics::Rng rng(99);
  std::vector<MIrrep> sigmas{{3, Weight::integral({2})},          {3, Weight::parse("1/2")},
                             {5, Weight::integral({1, 0})},       {5, Weight::integral({2, -1})},
                             {5, Weight::parse("3/2,1/2")},       {7, Weight::integral({1, 1, 0})},
                             {7, Weight::parse("1/2,1/2,-1/2")}};
  for (const auto& s : sigmas) {
    const int n = repkit::m_rank(s.d);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> angles(n);
      for (auto& a : angles) a = rng.uniform(-kPi, kPi);
      CHECK(std::abs(character(s, angles) - weyl_character(s, angles)) < 1e-10);
    }
    // identity element: the character is the dimension
    const std::vector<double> zero(n, 0.0);
    CHECK(character(s, zero).real() == doctest::Approx(double(repkit::dimension(s))));
    if (n == 1) CHECK(std::abs(weyl_character(s, zero) - double(repkit::dimension(s))) < 1e-12);
    // one collision
    if (n >= 2) {
      std::vector<double> coll(n);
      for (int j = 0; j < n; ++j) coll[j] = 0.3 + 0.7 * j;
      coll[1] = coll[0];
      CHECK(std::abs(character(s, coll) - weyl_character(s, coll)) < 1e-5);
    }
  }
  // d = 3: e^{i k theta}
  CHECK(std::abs(character(MIrrep{3, Weight::integral({2})}, {0.3}) - std::polar(1.0, 0.6)) < 1e-15);
}

TEST_CASE("symmetric-power resummation") {
  numerics::Rng rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    const int mb = 1 + trial % 3, mc = 1 + (trial / 3) % 3;
    auto B = oracles::random_matrix(rng, mb, rng.uniform(0.2, 1.0));
    auto C = oracles::random_matrix(rng, mc, rng.uniform(0.1, 0.5));
    const cplx q = std::polar(rng.uniform(0.1, 0.6), rng.uniform(-kPi, kPi));
    const cplx resummed = resummed_log_factor(B, C, q, 1e-14);
    const cplx brute = oracles::brute_force_log_product(B, C, q, 60);
    CHECK(std::abs(resummed - brute) < 1e-10);
    // eigenvalue products agree with explicit symmetric powers
    for (int k = 0; k <= 3; ++k) {
      const auto S = oracles::symmetric_power(C, k);
      const auto I = Eigen::MatrixXcd::Identity(mb * S.rows(), mb * S.rows());
      const cplx explicit_det = (I - q * oracles::kron(B, S)).determinant();
      const cplx from_eigen = std::exp(oracles::brute_force_log_product(B, C, q, k) -
                                       (k > 0 ? oracles::brute_force_log_product(B, C, q, k - 1) : cplx(0)));
      CHECK(std::abs(explicit_det - from_eigen) < 1e-12);
    }
  }
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(resummed_log_factor(big, big, 0.5, 1e-10), DomainError);
}
