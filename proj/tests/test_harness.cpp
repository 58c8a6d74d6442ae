#include <cmath>

#include "doctest.h"
#include "dynzeta/errors.hpp"
#include "dynzeta/harness.hpp"
#include "dynzeta/spectra.hpp"
#include "oracles.hpp"

using namespace dynzeta;
using namespace dynzeta::harness;
using numerics::kPi;
using repkit::Weight;

namespace {

ExperimentConfig config(int d, const std::string& sigma, std::uint64_t seed = 5) {
  ExperimentConfig c;
  c.d = d;
  c.sigma = repkit::make_mirrep(d, Weight::parse(sigma));
  c.dim_chi = 2;
  c.vol_x = 1.7;
  c.seed = seed;
  c.s_grid = {0.0, 0.5, 1.0, 1.5, 2.0};
  return c;
}

const Fault kFaults[] = {Fault::perturbed_constant, Fault::dropped_sign, Fault::wrong_rho};

bool consistent(const VerificationReport& r) { return r.passed && *r.passed == (r.max_residual <= r.tolerance); }

}  // namespace

TEST_CASE("Selberg functional equation through the determinant realization") {
  auto c = config(3, "0");
  auto r = verify_selberg_funceq(c);
  CHECK(r.passed.value());
  CHECK(r.max_residual < 1e-10);
  CHECK(r.per_point_residuals.front().residual == 0.0);  // s = 0
  CHECK(consistent(r));

  for (Fault f : kFaults) {
    c.fault = f;
    CHECK_FALSE(verify_selberg_funceq(c).passed.value());
  }
  c.fault = Fault::odd_plancherel;
  CHECK_FALSE(verify_selberg_funceq(c).passed.value());

  auto d5 = config(5, "1,0");
  d5.s_grid.push_back({0.7, 0.4});
  CHECK(verify_selberg_funceq(d5).passed.value());
  CHECK_THROWS_AS(verify_selberg_funceq(config(5, "1,1")), DomainError);
}

TEST_CASE("symmetrized functional equation") {
  for (auto [d, s] : {std::pair{3, "1"}, std::pair{5, "1,1"}, std::pair{5, "1/2,1/2"}}) {
    auto c = config(d, s);
    auto r = verify_symmetrized_funceq(c);
    CHECK(r.passed.value());
    for (Fault f : kFaults) {
      c.fault = f;
      CHECK_FALSE(verify_symmetrized_funceq(c).passed.value());
    }
    c.fault = Fault::odd_plancherel;
    CHECK_FALSE(verify_symmetrized_funceq(c).passed.value());
  }
  CHECK_THROWS_AS(verify_symmetrized_funceq(config(5, "1,0")), DomainError);

  // A Weyl-invariant sigma pushed through the case (b) pipeline: S = Z^2.
  auto c = config(5, "1,0");
  c.duplicate_invariant = true;
  auto sym = verify_symmetrized_funceq(c);
  auto sel = verify_selberg_funceq(c);
  CHECK(sym.passed.value());
  for (cplx s : c.s_grid) CHECK(std::abs(log_symmetrized_det(c, s) - 2.0 * log_selberg_det(c, s)) < 1e-11);
  for (std::size_t i = 0; i < sym.per_point_residuals.size(); ++i)
    CHECK(sym.per_point_residuals[i].residual <= 2 * sel.per_point_residuals[i].residual + 1e-11);
}

TEST_CASE("super zeta realization against the closed form") {
  numerics::Rng rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    auto c = config(5, "1,1", 100 + trial);
    const auto D = dirac_spectrum(c);
    for (cplx s : {cplx(0.5), cplx(1.2), cplx(-0.8), cplx(2.0, 0.1)}) {
      CHECK(std::abs(log_super_zeta_spectral(D, s, 1e-12) - oracles::super_zeta_closed_form(D, s)) < 1e-9);
    }
  }
}

TEST_CASE("super functional equation") {
  auto c = config(5, "1,1");
  c.s_grid = {0.5, 1.0, 1.5, 2.0};

  // symmetric spectrum: eta = 0, both identities trivial
  c.dirac_spectrum = geodata::make_operator_spectrum("sym", {{cplx(1, 0.2), 1}, {cplx(-1, -0.2), 1},
                                                             {cplx(2.5, -0.4), 2}, {cplx(-2.5, 0.4), 2}});
  auto sym = verify_super_funceq(c);
  CHECK(sym.passed.value());
  CHECK(sym.metric("eta") == 0.0);
  CHECK(sym.max_residual < 1e-10);

  // {1+i}: eta = 1, the product is e^{2 pi i} with the log landing on 2 pi i
  c.dirac_spectrum = geodata::make_operator_spectrum("one", {{cplx(1, 1), 1}});
  auto one = verify_super_funceq(c);
  CHECK(one.passed.value());
  CHECK(one.metric("eta") == 1.0);
  CHECK(std::abs(one.per_point_residuals[0].lhs - cplx(0, 2 * kPi)) < 1e-9);

  c.dirac_spectrum.reset();
  auto r = verify_super_funceq(c);
  CHECK(r.passed.value());
  CHECK(r.metric("eta") != 0.0);
  CHECK(r.max_residual < 1e-8);
  for (Fault f : kFaults) {
    c.fault = f;
    CHECK_FALSE(verify_super_funceq(c).passed.value());
  }
  c.fault = Fault::odd_plancherel;
  CHECK_THROWS_AS(verify_super_funceq(c), DomainError);

  c.fault = Fault::none;
  c.dirac_spectrum = geodata::make_operator_spectrum("axis", {{cplx(0, 1), 1}});
  CHECK_THROWS_AS(verify_super_funceq(c), DomainError);
  CHECK_THROWS_AS(verify_super_funceq(config(5, "1,0")), DomainError);
}

TEST_CASE("combination of the symmetrized and super equations") {
  auto c = config(5, "1/2,1/2");
  c.s_grid = {0.5, 1.0, 2.0};
  auto r = verify_combined_funceq(c);
  CHECK(r.passed.value());
  for (Fault f : {Fault::perturbed_constant, Fault::dropped_sign, Fault::wrong_rho, Fault::odd_plancherel}) {
    c.fault = f;
    CHECK_FALSE(verify_combined_funceq(c).passed.value());
  }
}

TEST_CASE("Ruelle functional equation") {
  auto c = config(3, "0");
  c.s_grid = {0.0, 0.25, 0.8, 1.3, 2.1};
  auto r = verify_ruelle_funceq(c);
  CHECK(r.passed.value());
  CHECK(r.per_point_residuals.front().residual == 0.0);
  CHECK(r.metric("lemma_constant") == 4.0);
  CHECK(r.metric("expected_slope") == doctest::Approx(-4 * kPi * 4 * 2 * 1.7));
  CHECK(r.metric("slope_relative_error") < 1e-9);
  for (Fault f : kFaults) {
    c.fault = f;
    CHECK_FALSE(verify_ruelle_funceq(c).passed.value());
  }
  c.fault = Fault::odd_plancherel;
  CHECK_THROWS_AS(verify_ruelle_funceq(c), DomainError);

  auto a5 = config(5, "1,0");
  auto ra = verify_ruelle_funceq(a5);
  CHECK(ra.passed.value());
  CHECK(ra.metric("slope_relative_error") < 1e-9);

  auto b = config(5, "1,1");
  b.s_grid = {0.5, 1.0, 2.0};
  auto rb = verify_ruelle_funceq(b);
  CHECK(rb.passed.value());
  CHECK(rb.metric("eta") != 0.0);
  CHECK(rb.metric("slope_relative_error") < 1e-9);
  double super = 0;
  for (const auto& p : rb.per_point_residuals)
    if (p.identity == "super_ruelle") super = std::max(super, p.residual);
  CHECK(super < 1e-8);
  for (Fault f : kFaults) {
    b.fault = f;
    CHECK_FALSE(verify_ruelle_funceq(b).passed.value());
  }
}

TEST_CASE("conjecture experiment reports without asserting") {
  auto c = config(3, "0");
  auto shared = verify_conjecture_experiment(c);
  CHECK_FALSE(shared.passed.has_value());
  CHECK(shared.metric("discrepancy") < 1e-10);

  c.shared_spectrum = false;
  auto apart = verify_conjecture_experiment(c);
  CHECK(std::isfinite(apart.metric("discrepancy")));
  CHECK(apart.metric("discrepancy") > 1e-6);

  auto b = config(5, "1,1");
  auto rb = verify_conjecture_experiment(b);
  CHECK(rb.metric("discrepancy") < 1e-10);

  c.shared_spectrum = true;
  c.singular = true;
  auto sing = verify_conjecture_experiment(c);
  REQUIRE(sing.findings.size() == 1);
  CHECK(sing.findings[0] == "Ruelle not regular at 0");
  CHECK_FALSE(sing.passed.has_value());
  b.singular = true;
  CHECK(verify_conjecture_experiment(b).findings.size() == 1);
}

TEST_CASE("log det asymptotics carry odd powers only") {
  for (int d : {3, 5, 7}) {
    auto c = config(d, d == 3 ? "0" : (d == 5 ? "0,0" : "0,0,0"), 40 + d);
    auto r = verify_odd_power_property(c);
    CHECK(r.passed.value());
    for (const auto& p : r.per_point_residuals)
      if (p.identity.rfind("even", 0) == 0) CHECK(std::abs(p.lhs) < 1e-6);
  }
}

TEST_CASE("configs and reports serialize deterministically") {
  auto c = config(5, "1/2,1/2");
  c.tolerances["residual"] = 1e-9;
  c.s_grid.push_back({1.0, 0.25});
  const std::string text = format_config(c);
  const auto back = parse_config(text);
  CHECK(format_config(back) == text);
  CHECK(format_report(verify_symmetrized_funceq(back)) == format_report(verify_symmetrized_funceq(c)));
  CHECK(format_report(run_experiment("super-funceq", c)) == format_report(run_experiment("super-funceq", c)));

  CHECK_THROWS_AS(parse_config("{\"d\": 4, \"s_grid\": [1]}"), DomainError);
  CHECK_THROWS_AS(parse_config("{\"d\": 3}"), DomainError);
  CHECK_THROWS_AS(parse_config("{\"d\": 3, \"s_grid\": []}"), DomainError);
  CHECK_THROWS_AS(parse_config("{\"d\": 3, \"s_grid\": [1], \"colour\": 1}"), DomainError);
  CHECK_THROWS_AS(parse_config("{\"d\": 3, \"s_grid\": [1], \"tolerances\": {\"residual\": -1}}"), DomainError);
  CHECK_THROWS_AS(parse_config("{\"d\": 5, \"sigma\": \"0,1\", \"s_grid\": [1]}"), DomainError);
  CHECK_THROWS_AS(run_experiment("nope", c), DomainError);
  auto ok = parse_config("{\"d\": 3, \"sigma\": [2], \"s_grid\": [1, [0.5, 0.1]], \"fault\": \"wrong_rho\"}");
  CHECK(ok.fault == Fault::wrong_rho);
  CHECK(ok.s_grid[1] == cplx(0.5, 0.1));
}
