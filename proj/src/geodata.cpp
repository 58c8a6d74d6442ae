#include "dynzeta/geodata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "dynzeta/errors.hpp"
#include "dynzeta/numerics.hpp"

namespace dynzeta::geodata {

using numerics::kPi;
using ojson = nlohmann::ordered_json;

namespace {

ojson complex_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

cplx complex_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("complex number must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
T field(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return obj.at(key).get<T>();
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (cplx b = z; n > 0; n >>= 1, b *= b)
    if (n & 1) r *= b;
  return r;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << content;
}

void validate(const LengthSpectrum& spec) {
  if (spec.d < 3 || spec.d % 2 == 0) throw ValidationError("d must be odd and >= 3", "");
  if (!(spec.vol_x > 0) || !std::isfinite(spec.vol_x)) throw ValidationError("vol_x must be positive", "");
  if (spec.dim_chi < 1) throw ValidationError("dim_chi must be positive", "");
  const std::size_t n_angles = static_cast<std::size_t>((spec.d - 1) / 2);
  std::set<std::string> ids;
  double previous = 0;
  for (const auto& g : spec.geodesics) {
    if (g.id.empty()) throw ValidationError("empty id", "");
    if (!ids.insert(g.id).second) throw ValidationError("duplicate id", g.id);
    if (!(g.length > 0) || !std::isfinite(g.length)) throw ValidationError("length must be positive", g.id);
    if (g.length < previous) throw ValidationError("geodesics must be sorted by length", g.id);
    previous = g.length;
    if (g.holonomy_angles.size() != n_angles) {
      throw ValidationError("dimension mismatch: expected " + std::to_string(n_angles) + " holonomy angles, got " +
                                std::to_string(g.holonomy_angles.size()),
                            g.id);
    }
    for (double a : g.holonomy_angles)
      if (!(a > -kPi && a <= kPi)) throw ValidationError("holonomy angle outside (-pi, pi]", g.id);
    if (g.chi_eigenvalues.size() != static_cast<std::size_t>(spec.dim_chi)) {
      throw ValidationError("dimension mismatch: dim_chi=" + std::to_string(spec.dim_chi) + " but " +
                                std::to_string(g.chi_eigenvalues.size()) + " chi eigenvalues",
                            g.id);
    }
    for (cplx z : g.chi_eigenvalues) {
      if (z == 0.0) throw ValidationError("zero chi eigenvalue", g.id);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ValidationError("non-finite chi eigenvalue", g.id);
    }
    if (g.n_multiplicity < 1) throw ValidationError("n_multiplicity must be positive", g.id);
  }
}

LengthSpectrum parse_length_spectrum(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  LengthSpectrum spec;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
      if (!have_header) {
        spec.d = field<int>(j, "d");
        spec.vol_x = field<double>(j, "vol_x");
        spec.dim_chi = field<int>(j, "dim_chi");
        have_header = true;
        continue;
      }
      PrimitiveGeodesic g;
      g.id = field<std::string>(j, "id");
      g.length = field<double>(j, "length");
      g.holonomy_angles = field<std::vector<double>>(j, "holonomy_angles");
      if (!j.contains("chi_eigenvalues") || !j["chi_eigenvalues"].is_array())
        throw std::invalid_argument("missing field 'chi_eigenvalues'");
      for (const auto& z : j["chi_eigenvalues"]) g.chi_eigenvalues.push_back(complex_from(z));
      g.n_multiplicity = j.contains("n_multiplicity") ? j["n_multiplicity"].get<int>() : 1;
      spec.geodesics.push_back(std::move(g));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_header) throw ParseError("missing header line", line_no);
  validate(spec);
  return spec;
}

LengthSpectrum load_length_spectrum(const std::string& path) { return parse_length_spectrum(read_file(path)); }

std::string format_length_spectrum(const LengthSpectrum& spec) {
  validate(spec);
  std::string out = ojson{{"d", spec.d}, {"vol_x", spec.vol_x}, {"dim_chi", spec.dim_chi}}.dump() + "\n";
  for (const auto& g : spec.geodesics) {
    ojson chi = ojson::array();
    for (cplx z : g.chi_eigenvalues) chi.push_back(complex_json(z));
    ojson rec{{"id", g.id},
              {"length", g.length},
              {"holonomy_angles", g.holonomy_angles},
              {"chi_eigenvalues", chi},
              {"n_multiplicity", g.n_multiplicity}};
    out += rec.dump() + "\n";
  }
  return out;
}

void save_length_spectrum(const LengthSpectrum& spec, const std::string& path) {
  write_file(path, format_length_spectrum(spec));
}

LengthSpectrum synthesize_length_spectrum(std::uint64_t seed, int count, int d, int dim_chi, bool unitary) {
  if (count < 0) throw DomainError("count must be nonnegative");
  if (dim_chi < 1) throw DomainError("dim_chi must be positive");
  const int n_angles = (d - 1) / 2;
  if (d < 3 || d % 2 == 0) throw DomainError("d must be odd and >= 3");
  numerics::Rng rng(seed);
  LengthSpectrum spec{d, 1.0, dim_chi, {}};
  // Prime geodesic growth ~ e^{hL}/(hL) with entropy h = d - 1: the k-th length
  // is roughly log(k)/h above the systole.
  const double h = d - 1;
  const double systole = rng.uniform(0.4, 0.8);
  std::vector<double> lengths;
  for (int k = 0; k < count; ++k) lengths.push_back(systole + std::log1p(k + rng.uniform()) / h * 2.0);
  std::sort(lengths.begin(), lengths.end());
  for (int k = 0; k < count; ++k) {
    PrimitiveGeodesic g;
    g.id = "g" + std::to_string(k + 1);
    g.length = lengths[k];
    for (int j = 0; j < n_angles; ++j) g.holonomy_angles.push_back(kPi - 2.0 * kPi * rng.uniform());
    for (int j = 0; j < dim_chi; ++j) {
      const double phase = rng.uniform(-kPi, kPi);
      const double radius = unitary ? 1.0 : std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
      g.chi_eigenvalues.push_back(std::polar(radius, phase));
    }
    spec.geodesics.push_back(std::move(g));
  }
  return spec;
}

double reduce_angle(double x) {
  double y = std::fmod(x + kPi, 2.0 * kPi);
  if (y <= 0) y += 2.0 * kPi;
  return y - kPi;
}

PrimitiveGeodesic geodesic_power(const PrimitiveGeodesic& g, int n) {
  if (n < 1) throw DomainError("power must be at least 1");
  if (n == 1) return g;
  PrimitiveGeodesic out;
  out.id = g.id + "^" + std::to_string(n);
  out.length = n * g.length;
  for (double a : g.holonomy_angles) out.holonomy_angles.push_back(reduce_angle(n * a));
  for (cplx z : g.chi_eigenvalues) out.chi_eigenvalues.push_back(ipow(z, n));
  out.n_multiplicity = g.n_multiplicity * n;
  return out;
}

// ---------------------------------------------------------------------------

std::int64_t OperatorSpectrum::total_multiplicity() const {
  std::int64_t s = 0;
  for (const auto& e : entries) s += e.mult;
  return s;
}

OperatorSpectrum make_operator_spectrum(std::string label, const std::vector<SpectralEntry>& entries) {
  OperatorSpectrum out{std::move(label), {}};
  for (const auto& e : entries) {
    if (e.mult <= 0) throw ValidationError("multiplicity must be positive", out.label);
    if (!std::isfinite(e.lambda.real()) || !std::isfinite(e.lambda.imag()))
      throw ValidationError("non-finite eigenvalue", out.label);
    auto it = std::find_if(out.entries.begin(), out.entries.end(),
                           [&](const SpectralEntry& x) { return x.lambda == e.lambda; });
    if (it != out.entries.end()) {
      it->mult += e.mult;
    } else {
      out.entries.push_back(e);
    }
  }
  return out;
}

double weyl_constant(int d, double rank, double vol) {
  return rank * vol / (std::pow(4.0 * kPi, 0.5 * d) * std::tgamma(0.5 * d + 1.0));
}

OperatorSpectrum synthesize_operator_spectrum(std::uint64_t seed, int count, const std::string& label,
                                              const ConeParams& p) {
  if (count < 0) throw DomainError("count must be nonnegative");
  numerics::Rng rng(seed);
  std::vector<SpectralEntry> entries;
  auto mult = [&] { return p.max_mult <= 1 ? std::int64_t{1} : rng.integer(1, p.max_mult); };

  if (p.kind == OperatorKind::laplace) {
    const double k_weyl = weyl_constant(p.weyl_d, p.weyl_rank, p.weyl_vol);
    for (int k = 0; k < count; ++k) {
      double re;
      if (p.weyl_mode) {
        // |lambda_k| = ((k + u)/K)^{2/d}: exactly k eigenvalues below each radius, up to jitter.
        re = std::pow((k + rng.uniform(0.05, 0.95)) / k_weyl, 2.0 / p.weyl_d);
      } else {
        re = rng.uniform(p.min_modulus, p.max_modulus);
      }
      const double width = p.slope * (re + p.shift);
      const double im = p.weyl_mode ? 0.0 : width * rng.uniform(-0.95, 0.95);
      entries.push_back({cplx(re, im), p.weyl_mode ? 1 : mult()});
    }
  } else {
    const double max_arg = std::atan(p.slope) * 0.95;
    for (int k = 0; k < count; ++k) {
      const double r = rng.uniform(p.min_modulus, p.max_modulus);
      const double arg = rng.uniform(-max_arg, max_arg);
      cplx lambda = std::polar(r, arg);
      const std::int64_t m = mult();
      if (p.symmetric) {
        entries.push_back({lambda, m});
        entries.push_back({-lambda, m});
      } else {
        if (rng.uniform() < p.negative_fraction) lambda = -lambda;
        entries.push_back({lambda, m});
      }
    }
    // Upper-right quadrant only, so the lower half-plane stays free for an Agmon ray.
    for (int k = 0; k < p.eta0_count; ++k) {
      const double r = rng.uniform(p.min_modulus, p.max_modulus);
      const double arg = rng.uniform(0.28, 0.40) * kPi;
      entries.push_back({std::polar(r, arg), 1});
    }
  }
  return make_operator_spectrum(label, entries);
}

std::size_t cone_violations(const OperatorSpectrum& spec, const ConeParams& p) {
  std::size_t bad = 0;
  for (const auto& e : spec.entries) {
    const cplx z = e.lambda;
    if (p.kind == OperatorKind::laplace) {
      if (!(z.real() > -p.shift) || std::abs(z.imag()) > p.slope * (z.real() + p.shift) + 1e-12) ++bad;
    } else {
      if ((z * z).real() <= 0) continue;
      if (std::abs(z.imag()) > p.slope * (std::abs(z.real()) + p.shift) + 1e-12) ++bad;
    }
  }
  return bad;
}

OperatorSpectrum parse_operator_spectrum(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("operator spectrum must be a JSON object");
    std::vector<SpectralEntry> entries;
    if (!j.contains("entries") || !j["entries"].is_array()) throw std::invalid_argument("missing field 'entries'");
    for (const auto& e : j["entries"]) {
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("entry must be [[re,im],mult]");
      entries.push_back({complex_from(e[0]), e[1].get<std::int64_t>()});
    }
    return make_operator_spectrum(j.value("label", std::string()), entries);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 1);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 1);
  }
}

OperatorSpectrum load_operator_spectrum(const std::string& path) { return parse_operator_spectrum(read_file(path)); }

std::string format_operator_spectrum(const OperatorSpectrum& spec) {
  ojson entries = ojson::array();
  for (const auto& e : spec.entries) entries.push_back(ojson::array({complex_json(e.lambda), e.mult}));
  return ojson{{"label", spec.label}, {"entries", entries}}.dump() + "\n";
}

void save_operator_spectrum(const OperatorSpectrum& spec, const std::string& path) {
  write_file(path, format_operator_spectrum(spec));
}

}  // namespace dynzeta::geodata
