// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dynzeta/errors.hpp"
#include "dynzeta/geodata.hpp"
#include "dynzeta/harness.hpp"
#include "dynzeta/plancherel.hpp"
#include "dynzeta/repkit.hpp"
#include "dynzeta/spectra.hpp"
#include "dynzeta/zetafun.hpp"
#include "oracles.hpp"

using namespace dynzeta;
using numerics::kPi;
using repkit::MIrrep;
using repkit::Weight;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Weight repeated(int n, const std::string& entry) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? "," : "") + entry;
  return Weight::parse(s);
}

Weight standard(int n) {
  std::string s = "1";
  for (int i = 1; i < n; ++i) s += ",0";
  return Weight::parse(s);
}

Outcome euler_characteristic() {
  Outcome r;
  for (int d : {3, 5, 7, 9, 11})
    if (plancherel::euler_characteristic_L(d) != static_cast<std::uint64_t>(d + 1)) {
      r.ok = false;
      r.detail += " d=" + std::to_string(d);
    }
  if (r.ok) r.detail = "chi = d+1 for d in {3,5,7,9,11}";
  return r;
}

std::vector<MIrrep> sigmas(int d) {
  const int n = repkit::m_rank(d);
  return {repkit::make_mirrep(d, repeated(n, "0")), repkit::make_mirrep(d, standard(n)),
          repkit::make_mirrep(d, repeated(n, "1/2"))};
}

Outcome lemma_constant() {
  Outcome r;
  int checked = 0;
  for (int d : {3, 5, 7})
    for (const auto& s : sigmas(d)) {
      const auto poly = plancherel::alternating_plancherel_sum(s, d).poly;
      ++checked;
      if (poly != plancherel::Polynomial::constant(plancherel::Rational((d + 1) * repkit::dimension(s)))) {
        r.ok = false;
        r.detail += " d=" + std::to_string(d) + " sigma=" + s.weight.to_string();
      }
    }
  if (r.ok) r.detail = std::to_string(checked) + " (d, sigma) pairs give (d+1) dim sigma";
  return r;
}

Outcome plancherel_interpolation() {
  Outcome r;
  int checked = 0;
  for (int d : {3, 5, 7}) {
    const int n = repkit::m_rank(d);
    const auto rs = repkit::make_root_system(repkit::Series::D, n + 1);
    for (const auto& s : sigmas(d)) {
      if (!harness::weyl_invariant(s)) continue;
      const auto p = plancherel::plancherel_polynomial(s, d).poly;
      for (int k = 1; k <= p.degree(); k += 2)
        if (p.coeff(k) != 0) r.ok = false;
      for (std::int64_t lam = 0; lam <= 3; ++lam) {
        std::vector<std::int64_t> t{2 * lam};
        for (auto x : s.weight.twice()) t.push_back(x);
        if (p(plancherel::Rational(lam + n)) != repkit::weyl_dimension_formula(rs, Weight(t))) r.ok = false;
      }
      ++checked;
    }
  }
  r.detail = std::to_string(checked) + " Weyl-invariant sigma";
  return r;
}

Outcome ruelle_factorization() {
  Outcome r;
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = trial % 2 ? 5 : 3;
    const auto spec = geodata::synthesize_length_spectrum(500 + trial, 3 + trial % 8, d, 1 + trial % 3, false);
    const auto all = sigmas(d);
    const auto& sigma = all[trial % 3];
    const double re = zetafun::ruelle_abscissa(spec) + 2.0;
    const double res = zetafun::ruelle_factorization_residual(spec, sigma, cplx(re, 0.1 * trial), 1e-13);
    worst = std::max(worst, res);
  }
  r.ok = worst < 1e-10;
  r.detail = "max residual " + fmt(worst) + " over 20 spectra";
  return r;
}

// Tail of sum_k sum_{|alpha|=k} |log(1 - q b c^alpha)| past K, bounded with moduli.
double tail_bound(int mb, int mc, double qb, double c, int K) {
  double sum = 0;
  for (int k = K + 1; k <= K + 400; ++k) {
    double count = 1;
    for (int j = 1; j < mc; ++j) count = count * (k + j) / j;
    const double x = qb * std::pow(c, k);
    sum += mb * count * x / (1 - x);
  }
  return sum;
}

double spectral_radius(const Eigen::MatrixXcd& M) {
  return Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(M, false).eigenvalues().cwiseAbs().maxCoeff();
}

Outcome resummation() {
  Outcome r;
  numerics::Rng rng(77);
  double worst = 0;
  int largest_k = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int mb = 1 + trial % 3, mc = 1 + (trial / 3) % 3;
    const auto B = oracles::random_matrix(rng, mb, rng.uniform(0.2, 1.0));
    const auto C = oracles::random_matrix(rng, mc, rng.uniform(0.1, 0.5));
    const cplx q = std::polar(rng.uniform(0.1, 0.6), rng.uniform(-kPi, kPi));
    const double qb = std::abs(q) * spectral_radius(B), c = spectral_radius(C);
    int K = 0;
    while (tail_bound(mb, mc, qb, c, K) >= 1e-12) ++K;
    largest_k = std::max(largest_k, K);
    const cplx diff = zetafun::resummed_log_factor(B, C, q, 1e-14) - oracles::brute_force_log_product(B, C, q, K);
    worst = std::max(worst, std::abs(diff));
  }
  r.ok = worst < 1e-10;
  r.detail = "max |diff| " + fmt(worst) + ", truncation up to k=" + std::to_string(largest_k);
  return r;
}

Outcome eta_machinery() {
  Outcome r;
  double worst = 0;
  int angles = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    geodata::ConeParams p;
    p.kind = geodata::OperatorKind::first_order;
    p.negative_fraction = 0.35;
    p.eta0_count = static_cast<int>(seed % 4);
    const int size = 10 + static_cast<int>(seed);
    const auto spec = geodata::synthesize_operator_spectrum(900 + seed, size - p.eta0_count, "D_sharp", p);
    worst = std::max(worst, spectra::eta_split_identity_residual(spec, spectra::choose_agmon_angle(spec), {0.5, 1.0, 2.0}));
    const auto expected = static_cast<double>(spectra::eta_invariant(spec));
    for (const auto& a : spectra::agmon_candidates(spec)) {
      ++angles;
      const cplx eta = spectra::eta_function(spec, a, 0.0).eta;
      if (eta != cplx(expected) || eta.real() != std::round(eta.real())) r.ok = false;
    }
  }
  r.ok = r.ok && worst < 1e-8;
  r.detail = "max split residual " + fmt(worst) + ", eta checked on " + std::to_string(angles) + " Agmon angles";
  return r;
}

Outcome determinant_oracle() {
  Outcome r;
  const double oracle = std::exp(-oracles::riemann_zeta_prime_zero());
  const double model_err = std::abs(spectra::model_determinant("riemann", 0.0) - oracle);
  numerics::Rng rng(31);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<geodata::SpectralEntry> e;
    const int size = 1 + static_cast<int>(rng.integer(1, 25));
    for (int k = 0; k < size; ++k) e.push_back({cplx(rng.uniform(0.1, 5), rng.uniform(-2, 2)), rng.integer(1, 3)});
    const auto spec = geodata::make_operator_spectrum("A", e);
    const cplx s(rng.uniform(-2, 2), rng.uniform(-2, 2));
    cplx product = 1;
    for (const auto& x : spec.entries)
      for (std::int64_t m = 0; m < x.mult; ++m) product *= x.lambda + s * s;
    worst = std::max(worst, std::abs(spectra::regularized_determinant(spec, s).value - product) / std::abs(product));
  }
  r.ok = model_err < 1e-8 && worst < 1e-12;
  r.detail = "riemann model off by " + fmt(model_err) + ", finite relative error " + fmt(worst);
  return r;
}

Outcome graded_determinant() {
  Outcome r;
  numerics::Rng rng(8);
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const double theta = rng.uniform(-kPi / 2 + 0.1, -0.1);
    const int size = static_cast<int>(rng.integer(1, 50));
    const auto [plus, minus] = oracles::admissible_pair(300 + seed, size / 2 + 1, theta);
    worst = std::max(worst, spectra::thm75_residual(plus, minus, theta));
    if (spectra::refined_torsion(plus, minus, theta, 0.0, 2, 5) != spectra::graded_determinant(plus, minus, theta))
      r.ok = false;
  }
  r.ok = r.ok && worst < 1e-9;
  r.detail = "max residual " + fmt(worst) + " over 20 pairs";
  return r;
}

harness::ExperimentConfig experiment(int d, const std::string& sigma, std::uint64_t seed) {
  harness::ExperimentConfig c;
  c.d = d;
  c.sigma = repkit::make_mirrep(d, Weight::parse(sigma));
  c.dim_chi = 2;
  c.vol_x = 1.3;
  c.seed = seed;
  c.s_grid = {0.0, 0.5, 1.0, 1.5, 2.0, cplx(0.8, 0.3)};
  c.tolerances["residual"] = 1e-8;
  c.tolerances["slope"] = 1e-9;
  return c;
}

Outcome functional_equations() {
  Outcome r;
  struct Run {
    std::string name;
    int d;
    std::string sigma;
    bool integrates_plancherel;
  };
  const std::vector<Run> runs{
      {"selberg-funceq", 3, "0", true},        {"selberg-funceq", 5, "1,0", true},
      {"symmetrized-funceq", 3, "1", true},    {"symmetrized-funceq", 5, "1/2,1/2", true},
      {"super-funceq", 3, "1/2", false},       {"super-funceq", 5, "1,1", false},
      {"combined-funceq", 3, "1", true},       {"combined-funceq", 5, "1/2,1/2", true},
      {"ruelle-funceq", 3, "0", false},        {"ruelle-funceq", 3, "1", false},
      {"ruelle-funceq", 5, "0,0", false},      {"ruelle-funceq", 5, "1,1", false},
  };
  int passes = 0, controls = 0;
  double worst = 0, worst_slope = 0;
  for (const auto& run : runs) {
    auto c = experiment(run.d, run.sigma, 11 + run.d);
    if (run.name == "super-funceq" || run.name == "combined-funceq" || (run.name == "ruelle-funceq" && run.sigma != "0" && run.sigma != "0,0"))
      c.s_grid = {0.5, 1.0, 2.0};
    const auto rep = harness::run_experiment(run.name, c);
    if (!rep.passed.value_or(false)) {
      r.ok = false;
      r.detail += " " + run.name + "(d=" + std::to_string(run.d) + ",sigma=" + run.sigma + ") failed;";
    } else {
      ++passes;
    }
    worst = std::max(worst, rep.max_residual);
    if (rep.has_metric("slope_relative_error")) {
      worst_slope = std::max(worst_slope, rep.metric("slope_relative_error"));
      if (!(rep.metric("slope_relative_error") < 1e-9)) r.ok = false;
    }
    std::vector<harness::Fault> faults{harness::Fault::perturbed_constant, harness::Fault::dropped_sign,
                                       harness::Fault::wrong_rho};
    if (run.integrates_plancherel) faults.push_back(harness::Fault::odd_plancherel);
    for (auto f : faults) {
      c.fault = f;
      ++controls;
      if (harness::run_experiment(run.name, c).passed.value_or(true)) {
        r.ok = false;
        r.detail += " fault " + harness::fault_name(f) + " not caught by " + run.name + ";";
      }
    }
  }
  if (r.ok)
    r.detail = std::to_string(passes) + " runs pass (max residual " + fmt(worst) + ", max slope error " +
               fmt(worst_slope) + "), " + std::to_string(controls) + " fault controls fail";
  return r;
}

Outcome weyl_law() {
  Outcome r;
  double lo = 2, hi = 0;
  for (auto [d, rank] : {std::pair{3, 2.0}, std::pair{5, 1.0}, std::pair{7, 3.0}}) {
    geodata::ConeParams p;
    p.weyl_mode = true;
    p.weyl_d = d;
    p.weyl_rank = rank;
    const auto spec = geodata::synthesize_operator_spectrum(40 + d, 500, "A_sharp", p);
    const auto fit = spectra::weyl_law_fit(spec, d, rank, 1.0);
    lo = std::min(lo, fit.min_ratio);
    hi = std::max(hi, fit.max_ratio);
  }
  r.ok = lo >= 0.95 && hi <= 1.05;
  r.detail = "top-decile ratios in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome reproducibility() {
  Outcome r;
  const std::string bin = DYNZETA_CLI_PATH;
  const fs::path dir = fs::temp_directory_path() / ("dynzeta_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto at = [&](const std::string& name) { return (dir / name).string(); };
  const std::vector<std::string> corpus{
      "synth length --d 3 --seed 4 --count 8 --dim-chi 2 --out " + at("l3.jsonl"),
      "synth length --d 5 --seed 9 --count 6 --dim-chi 3 --out " + at("l5.jsonl"),
      "synth operator --kind first_order --seed 2 --count 14 --eta0-count 2 --out " + at("dirac.json"),
      "synth operator --kind laplace --seed 3 --count 20 --out " + at("lap.json"),
      "synth operator --kind laplace --weyl --d 5 --rank 2 --count 50 --seed 6",
      "synth config --d 5 --sigma 1,1 --seed 3 --s 0.5 --s 1,0 --out " + at("c5.json"),
      "synth config --d 3 --seed 7 --s 0.5 --s 1.5 --s 0.8,0.3 --out " + at("c3.json"),
      "plancherel --d 7 --sigma 1/2,1/2,1/2",
      "plancherel --d 5 --sigma 1,1 --alternating --format csv",
      "zeta selberg --in " + at("l3.jsonl") + " --s 4,0.5 --s 5",
      "zeta ruelle --in " + at("l5.jsonl") + " --s 8,1 --sigma 1,0",
      "zeta symmetrized --in " + at("l3.jsonl") + " --s 5 --sigma 1 --format csv",
      "zeta super --in " + at("l5.jsonl") + " --s 7 --sigma 1/2,1/2",
      "det --in " + at("lap.json") + " --s 0.5 --s 1,1",
      "det --model harmonic --s 0 --s 0.5",
      "eta --in " + at("dirac.json") + " --s 0.5 --s 1 --s 2",
      "verify euler-char --d 9",
      "verify lemma-constant --d 7 --sigma 1,0,0",
      "verify factorization --in " + at("l3.jsonl") + " --s 6,0.5",
      "verify selberg-funceq --config " + at("c3.json"),
      "verify super-funceq --config " + at("c5.json"),
      "verify ruelle-funceq --config " + at("c5.json") + " --format csv",
      "verify conjecture --config " + at("c3.json"),
      "verify odd-powers --config " + at("c3.json"),
  };
  int identical = 0;
  for (const auto& cmd : corpus) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const auto target = at("run" + std::to_string(run));
      const int status = std::system((bin + " " + cmd + " > " + target + " 2>&1").c_str());
      outputs[run] = std::to_string(status) + "\n" + slurp(target);
      if (status != 0) {
        r.ok = false;
        r.detail += " exit " + std::to_string(status) + ": " + cmd + ";";
      }
    }
    if (outputs[0] == outputs[1]) {
      ++identical;
    } else {
      r.ok = false;
      r.detail += " differs: " + cmd + ";";
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (r.ok) r.detail = std::to_string(identical) + " invocations byte-identical across two runs";
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Euler characteristic", euler_characteristic},
      {"alternating Plancherel constant", lemma_constant},
      {"Plancherel evenness and interpolation", plancherel_interpolation},
      {"Ruelle factorization", ruelle_factorization},
      {"symmetric-power resummation", resummation},
      {"eta machinery", eta_machinery},
      {"determinant oracle", determinant_oracle},
      {"graded determinant identity", graded_determinant},
      {"functional equations", functional_equations},
      {"Weyl law", weyl_law},
      {"CLI reproducibility", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << i + 1 << ". " << criteria[i].first << ": " << o.detail << " ("
              << fmt(secs) << " s)\n"
              << std::flush;
  }
  return failures == 0 ? 0 : 1;
}
