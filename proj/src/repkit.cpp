#include "dynzeta/repkit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dynzeta/errors.hpp"

namespace dynzeta::repkit {

namespace {

Weight root(int ambient, int i, int si, int j, int sj) {
  std::vector<std::int64_t> v(ambient, 0);
  v[i] += 2 * si;
  if (j >= 0) v[j] += 2 * sj;
  return Weight(std::move(v));
}

Rational parse_coordinate(const std::string& tok) {
  auto slash = tok.find('/');
  try {
    if (slash != std::string::npos) {
      return Rational(std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1)));
    }
    if (tok.find_first_of(".eE") != std::string::npos) {
      double x = std::stod(tok);
      double twice = 2.0 * x;
      if (std::abs(twice - std::round(twice)) > 1e-12) {
        throw DomainError("weight coordinate '" + tok + "' is not a half-integer");
      }
      return Rational(static_cast<long long>(std::llround(twice)), 2);
    }
    return Rational(std::stoll(tok));
  } catch (const std::invalid_argument&) {
    throw DomainError("cannot parse weight coordinate '" + tok + "'");
  } catch (const std::out_of_range&) {
    throw DomainError("weight coordinate '" + tok + "' out of range");
  }
}

}  // namespace

Weight::Weight(std::vector<std::int64_t> twice) : twice_(std::move(twice)) {
  if (twice_.empty()) return;
  const bool odd = (twice_[0] % 2) != 0;
  for (auto t : twice_) {
    if (((t % 2) != 0) != odd) {
      throw DomainError("weight mixes integer and half-odd coordinates");
    }
  }
}

Weight Weight::integral(const std::vector<std::int64_t>& coords) {
  std::vector<std::int64_t> t(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) t[i] = 2 * coords[i];
  return Weight(std::move(t));
}

Weight Weight::from_rationals(const std::vector<Rational>& coords) {
  std::vector<std::int64_t> t;
  t.reserve(coords.size());
  for (const auto& c : coords) {
    Rational twice = 2 * c;
    if (boost::multiprecision::denominator(twice) != 1) {
      throw DomainError("weight coordinate is not a half-integer");
    }
    t.push_back(static_cast<std::int64_t>(boost::multiprecision::numerator(twice)));
  }
  return Weight(std::move(t));
}

Weight Weight::parse(const std::string& text) {
  std::vector<Rational> coords;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) throw DomainError("empty weight coordinate in '" + text + "'");
    coords.push_back(parse_coordinate(tok));
  }
  if (coords.empty()) throw DomainError("empty weight");
  return from_rationals(coords);
}

bool Weight::is_zero() const {
  return std::all_of(twice_.begin(), twice_.end(), [](auto t) { return t == 0; });
}

bool Weight::is_spin() const { return !twice_.empty() && (twice_[0] % 2) != 0; }

std::string Weight::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < twice_.size(); ++i) {
    if (i) out += ',';
    if (twice_[i] % 2 == 0) {
      out += std::to_string(twice_[i] / 2);
    } else {
      out += std::to_string(twice_[i]) + "/2";
    }
  }
  return out;
}

Weight Weight::operator+(const Weight& o) const {
  std::vector<std::int64_t> t(twice_);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += o.twice_[i];
  return Weight(std::move(t));
}

Weight Weight::operator-(const Weight& o) const {
  std::vector<std::int64_t> t(twice_);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] -= o.twice_[i];
  return Weight(std::move(t));
}

Weight Weight::operator-() const { return scaled(-1); }

Weight Weight::scaled(std::int64_t k) const {
  std::vector<std::int64_t> t(twice_);
  for (auto& x : t) x *= k;
  return Weight(std::move(t));
}

std::int64_t dot4(const Weight& a, const Weight& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.twice(i) * b.twice(i);
  return s;
}

RootSystem make_root_system(Series series, int rank) {
  if (rank < 1) throw DomainError("root system rank must be at least 1");
  RootSystem rs{series, rank, rank, {}, {}, {}};
  const int n = rank;
  std::vector<std::int64_t> rho;
  switch (series) {
    case Series::A: {
      rs.ambient = n + 1;
      for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) rs.positive_roots.push_back(root(n + 1, i, 1, j, -1));
      for (int i = 0; i < n; ++i) rs.simple_roots.push_back(root(n + 1, i, 1, i + 1, -1));
      for (int i = 0; i <= n; ++i) rho.push_back(n - 2 * i);
      break;
    }
    case Series::B: {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          rs.positive_roots.push_back(root(n, i, 1, j, -1));
          rs.positive_roots.push_back(root(n, i, 1, j, 1));
        }
        rs.positive_roots.push_back(root(n, i, 1, -1, 0));
      }
      for (int i = 0; i + 1 < n; ++i) rs.simple_roots.push_back(root(n, i, 1, i + 1, -1));
      rs.simple_roots.push_back(root(n, n - 1, 1, -1, 0));
      for (int i = 0; i < n; ++i) rho.push_back(2 * n - 2 * i - 1);
      break;
    }
    case Series::D: {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          rs.positive_roots.push_back(root(n, i, 1, j, -1));
          rs.positive_roots.push_back(root(n, i, 1, j, 1));
        }
      for (int i = 0; i + 1 < n; ++i) rs.simple_roots.push_back(root(n, i, 1, i + 1, -1));
      if (n >= 2) rs.simple_roots.push_back(root(n, n - 2, 1, n - 1, 1));
      for (int i = 0; i < n; ++i) rho.push_back(2 * (n - 1 - i));
      break;
    }
  }
  rs.rho = Weight(std::move(rho));
  return rs;
}

std::uint64_t weyl_group_order(Series series, int rank) {
  if (rank < 1) throw DomainError("Weyl group rank must be at least 1");
  if (rank > 19) throw DomainError("Weyl group order overflows 64 bits");
  std::uint64_t fact = 1;
  for (int i = 2; i <= rank; ++i) fact *= static_cast<std::uint64_t>(i);
  switch (series) {
    case Series::A:
      return fact * static_cast<std::uint64_t>(rank + 1);
    case Series::B:
      return fact << rank;
    case Series::D:
      return fact << (rank - 1);
  }
  throw DomainError("unknown series");
}

bool is_dominant(const RootSystem& rs, const Weight& w) {
  return std::all_of(rs.simple_roots.begin(), rs.simple_roots.end(),
                     [&](const Weight& a) { return dot4(w, a) >= 0; });
}

bool is_integral(const RootSystem& rs, const Weight& w) {
  if (static_cast<int>(w.size()) != rs.ambient) return false;
  return std::all_of(rs.simple_roots.begin(), rs.simple_roots.end(), [&](const Weight& a) {
    return (2 * dot4(w, a)) % dot4(a, a) == 0;
  });
}

Rational weyl_dimension_formula(const RootSystem& rs, const Weight& w) {
  Rational r = 1;
  const Weight shifted = w + rs.rho;
  for (const auto& a : rs.positive_roots) r *= Rational(dot4(shifted, a), dot4(rs.rho, a));
  return r;
}

std::int64_t weyl_dimension(const RootSystem& rs, const Weight& highest) {
  if (!is_integral(rs, highest)) throw DomainError("weight " + highest.to_string() + " is not integral");
  if (!is_dominant(rs, highest)) throw DomainError("weight " + highest.to_string() + " is not dominant");
  Rational r = weyl_dimension_formula(rs, highest);
  if (boost::multiprecision::denominator(r) != 1 || r <= 0) {
    throw InvariantViolation("Weyl dimension formula produced a non-positive-integer value");
  }
  return static_cast<std::int64_t>(boost::multiprecision::numerator(r));
}

WeightMultiset freudenthal_multiplicities(const RootSystem& rs, const Weight& highest) {
  if (!is_integral(rs, highest) || !is_dominant(rs, highest)) {
    throw DomainError("Freudenthal recursion needs a dominant integral weight");
  }
  WeightMultiset mult;
  mult[highest] = 1;
  const Weight top = highest + rs.rho;
  const std::int64_t top_norm = dot4(top, top);
  const std::int64_t top_height = dot4(highest, rs.rho);

  std::vector<Weight> frontier{highest};
  while (!frontier.empty()) {
    std::set<Weight> candidates;
    for (const auto& mu : frontier)
      for (const auto& a : rs.simple_roots) candidates.insert(mu - a);
    std::vector<Weight> kept;
    for (const auto& nu : candidates) {
      if (mult.count(nu)) continue;
      const Weight shifted = nu + rs.rho;
      const std::int64_t denom = top_norm - dot4(shifted, shifted);
      if (denom <= 0) continue;
      std::int64_t num = 0;
      for (const auto& a : rs.positive_roots) {
        for (Weight x = nu + a; dot4(x, rs.rho) <= top_height; x = x + a) {
          auto it = mult.find(x);
          if (it != mult.end()) num += it->second * dot4(x, a);
        }
      }
      num *= 2;
      if (num % denom != 0) throw InvariantViolation("Freudenthal recursion gave a fractional multiplicity");
      const std::int64_t m = num / denom;
      if (m > 0) {
        mult[nu] = m;
        kept.push_back(nu);
      }
    }
    frontier = std::move(kept);
  }
  return mult;
}

std::optional<std::pair<Weight, int>> dot_dominant(const RootSystem& rs, const Weight& w) {
  Weight x = w + rs.rho;
  int sign = 1;
  for (bool moved = true; moved;) {
    moved = false;
    for (const auto& a : rs.simple_roots) {
      const std::int64_t ip = dot4(x, a);
      if (ip < 0) {
        const std::int64_t num = 2 * ip;
        const std::int64_t den = dot4(a, a);
        if (num % den != 0) throw DomainError("reflection of a non-integral weight");
        x = x - a.scaled(num / den);
        sign = -sign;
        moved = true;
        break;
      }
    }
  }
  for (const auto& a : rs.simple_roots)
    if (dot4(x, a) == 0) return std::nullopt;
  return std::make_pair(x - rs.rho, sign);
}

WeightMultiset tensor_decompose(const RootSystem& rs, const Weight& mu, const Weight& nu) {
  if (!is_integral(rs, mu) || !is_dominant(rs, mu)) throw DomainError("tensor factor not dominant integral");
  WeightMultiset out;
  for (const auto& [kappa, m] : freudenthal_multiplicities(rs, nu)) {
    auto dom = dot_dominant(rs, mu + kappa);
    if (!dom) continue;
    out[dom->first] += dom->second * m;
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second < 0) throw InvariantViolation("Klimyk formula left a negative multiplicity");
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  }
  return out;
}

// ---------------------------------------------------------------------------

void check_odd_dimension(int d) {
  if (d < 3 || d % 2 == 0) throw DomainError("d must be an odd integer >= 3, got " + std::to_string(d));
}

int m_rank(int d) {
  check_odd_dimension(d);
  return (d - 1) / 2;
}

RootSystem m_root_system(int d) { return make_root_system(Series::D, m_rank(d)); }

MIrrep make_mirrep(int d, const Weight& weight) {
  const int n = m_rank(d);
  if (static_cast<int>(weight.size()) != n) {
    throw DomainError("weight " + weight.to_string() + " has " + std::to_string(weight.size()) +
                      " coordinates; d=" + std::to_string(d) + " needs " + std::to_string(n));
  }
  const RootSystem rs = m_root_system(d);
  if (!is_integral(rs, weight) || !is_dominant(rs, weight)) {
    throw DomainError("weight " + weight.to_string() + " is not a dominant weight of Spin(" +
                      std::to_string(d - 1) + ")");
  }
  return MIrrep{d, weight};
}

MIrrep trivial_mirrep(int d) { return MIrrep{d, Weight(std::vector<std::int64_t>(m_rank(d), 0))}; }

std::int64_t dimension(const MIrrep& sigma) { return weyl_dimension(m_root_system(sigma.d), sigma.weight); }

VirtualMRep::VirtualMRep(const MIrrep& sigma) : d(sigma.d) { terms[sigma.weight] = 1; }

void VirtualMRep::add(const Weight& w, std::int64_t mult) {
  auto& m = terms[w];
  m += mult;
  if (m == 0) terms.erase(w);
}

void VirtualMRep::add(const VirtualMRep& other, std::int64_t scale) {
  for (const auto& [w, m] : other.terms) add(w, scale * m);
}

std::int64_t VirtualMRep::dimension() const {
  const RootSystem rs = m_root_system(d);
  std::int64_t s = 0;
  for (const auto& [w, m] : terms) s += m * weyl_dimension(rs, w);
  return s;
}

std::int64_t VirtualMRep::abs_dimension() const {
  const RootSystem rs = m_root_system(d);
  std::int64_t s = 0;
  for (const auto& [w, m] : terms) s += (m < 0 ? -m : m) * weyl_dimension(rs, w);
  return s;
}

VirtualMRep tensor(const VirtualMRep& a, const VirtualMRep& b) {
  if (a.d != b.d) throw DomainError("tensor product of representations for different d");
  const RootSystem rs = m_root_system(a.d);
  VirtualMRep out(a.d);
  for (const auto& [wa, ma] : a.terms)
    for (const auto& [wb, mb] : b.terms)
      for (const auto& [w, m] : tensor_decompose(rs, wa, wb)) out.add(w, ma * mb * m);
  return out;
}

std::vector<ExteriorPower> exterior_powers_of_n(int d) {
  const int n = m_rank(d);
  auto ones = [n](int p, int last_sign) {
    std::vector<std::int64_t> c(n, 0);
    for (int i = 0; i < p; ++i) c[i] = 1;
    if (p == n) c[n - 1] = last_sign;
    return Weight::integral(c);
  };
  std::vector<ExteriorPower> out;
  for (int p = 0; p <= 2 * n; ++p) {
    const int q = p <= n ? p : 2 * n - p;  // Hodge star identifies degrees p and 2n-p
    VirtualMRep rep(d);
    if (q < n) {
      rep.add(ones(q, 0), 1);
    } else {
      rep.add(ones(n, 1), 1);
      rep.add(ones(n, -1), 1);
    }
    out.push_back(ExteriorPower{p, std::move(rep), p});
  }
  return out;
}

std::pair<MIrrep, bool> weyl_action(const MIrrep& sigma) {
  std::vector<std::int64_t> t = sigma.weight.twice();
  t.back() = -t.back();
  MIrrep flipped{sigma.d, Weight(std::move(t))};
  const bool invariant = flipped == sigma;
  return {flipped, invariant};
}

VirtualMRep weyl_action(const VirtualMRep& v) {
  VirtualMRep out(v.d);
  for (const auto& [w, m] : v.terms) out.add(weyl_action(MIrrep{v.d, w}).first.weight, m);
  return out;
}

}  // namespace dynzeta::repkit
