#include "xoslab/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>

namespace xoslab::info {

namespace {

constexpr Real kSumTolerance = 1e-12L;

Real plogp_inv(Real p) { return p > 0 ? -p * std::log2(p) : 0; }

void require_disjoint(const VarList& a, const VarList& b, const char* what) {
  for (const auto& v : a) {
    if (std::find(b.begin(), b.end(), v) != b.end()) {
      throw std::invalid_argument(std::string(what) + ": variable '" + v + "' appears in two groups");
    }
  }
}

template <class T>
std::vector<T> concat(std::vector<T> a, const std::vector<T>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

JointDistribution::JointDistribution(VarList names, const std::vector<std::pair<Outcome, Real>>& support)
    : names_(std::move(names)) {
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw std::invalid_argument("joint distribution: duplicate variable names");
  Real total = 0;
  for (const auto& [x, p] : support) {
    if (x.size() != names_.size()) throw std::invalid_argument("joint distribution: outcome arity mismatch");
    if (!(p >= 0)) throw std::invalid_argument("joint distribution: negative probability");
    p_[x] += p;
    total += p;
  }
  if (std::fabs(total - 1) > kSumTolerance) {
    throw std::invalid_argument("joint distribution: probabilities sum to " + std::to_string(static_cast<double>(total)));
  }
}

JointDistribution JointDistribution::from_rationals(VarList names,
                                                    const std::vector<std::pair<Outcome, Rational>>& support) {
  Rational total = 0;
  std::vector<std::pair<Outcome, Real>> real;
  for (const auto& [x, p] : support) {
    total += p;
    real.emplace_back(x, static_cast<Real>(p));
  }
  if (total != 1) throw std::invalid_argument("joint distribution: rational probabilities do not sum to 1");
  return JointDistribution(std::move(names), real);
}

std::size_t JointDistribution::index_of(const std::string& var) const {
  const auto it = std::find(names_.begin(), names_.end(), var);
  if (it == names_.end()) throw std::invalid_argument("unknown variable '" + var + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

std::vector<std::size_t> JointDistribution::indices(const VarList& vars) const {
  std::vector<std::size_t> idx;
  for (const auto& v : vars) idx.push_back(index_of(v));
  return idx;
}

JointDistribution JointDistribution::marginal(const VarList& vars) const {
  const auto idx = indices(vars);
  JointDistribution out;
  out.names_ = vars;
  for (const auto& [x, p] : p_) {
    Outcome y;
    y.reserve(idx.size());
    for (auto i : idx) y.push_back(x[i]);
    out.p_[y] += p;
  }
  return out;
}

JointDistribution JointDistribution::condition(const std::vector<std::pair<std::string, int>>& given) const {
  std::vector<std::pair<std::size_t, int>> fixed;
  for (const auto& [v, val] : given) fixed.emplace_back(index_of(v), val);
  JointDistribution out;
  out.names_ = names_;
  Real mass = 0;
  for (const auto& [x, p] : p_) {
    if (std::all_of(fixed.begin(), fixed.end(), [&](const auto& f) { return x[f.first] == f.second; })) {
      out.p_[x] = p;
      mass += p;
    }
  }
  if (!(mass > 0)) throw std::domain_error("conditioning on an event of probability zero");
  for (auto& [x, p] : out.p_) p /= mass;
  return out;
}

JointDistribution JointDistribution::with_function(const std::string& name, const VarList& inputs,
                                                   const std::function<int(const Outcome&)>& f) const {
  if (std::find(names_.begin(), names_.end(), name) != names_.end()) {
    throw std::invalid_argument("variable '" + name + "' already exists");
  }
  const auto idx = indices(inputs);
  JointDistribution out;
  out.names_ = names_;
  out.names_.push_back(name);
  Outcome args(idx.size());
  for (const auto& [x, p] : p_) {
    for (std::size_t k = 0; k < idx.size(); ++k) args[k] = x[idx[k]];
    Outcome y = x;
    y.push_back(f(args));
    out.p_[y] += p;
  }
  return out;
}

JointDistribution product(const JointDistribution& a, const JointDistribution& b) {
  std::vector<std::pair<Outcome, Real>> support;
  for (const auto& [x, p] : a.support()) {
    for (const auto& [y, q] : b.support()) support.emplace_back(concat(x, y), p * q);
  }
  VarList names = a.names();
  names.insert(names.end(), b.names().begin(), b.names().end());
  return JointDistribution(std::move(names), support);
}

Real entropy(const JointDistribution& d, const VarList& vars) {
  const auto m = d.marginal(vars);
  Real h = 0;
  for (const auto& [x, p] : m.support()) h += plogp_inv(p);
  return h;
}

Real conditional_entropy(const JointDistribution& d, const VarList& x, const VarList& given) {
  require_disjoint(x, given, "conditional_entropy");
  // Group the (Z, X) marginal by z; the map order keeps each group contiguous.
  const auto zx = d.marginal(concat(given, x)).support();
  const std::size_t k = given.size();
  Real h = 0;
  auto it = zx.begin();
  while (it != zx.end()) {
    auto end = it;
    Real pz = 0;
    while (end != zx.end() && std::equal(it->first.begin(), it->first.begin() + static_cast<std::ptrdiff_t>(k),
                                         end->first.begin())) {
      pz += end->second;
      ++end;
    }
    if (pz > 0) {
      Real hz = 0;
      for (auto j = it; j != end; ++j) hz += plogp_inv(j->second / pz);
      h += pz * hz;
    }
    it = end;
  }
  return h;
}

Real mutual_info(const JointDistribution& d, const VarList& x, const VarList& y, const VarList& given) {
  require_disjoint(x, y, "mutual_info");
  require_disjoint(x, given, "mutual_info");
  require_disjoint(y, given, "mutual_info");
  return conditional_entropy(d, x, given) - conditional_entropy(d, x, concat(y, given));
}

Real mutual_info_kl(const JointDistribution& d, const VarList& x, const VarList& y, const VarList& given) {
  require_disjoint(x, y, "mutual_info_kl");
  require_disjoint(x, given, "mutual_info_kl");
  require_disjoint(y, given, "mutual_info_kl");
  const auto xyz = d.marginal(concat(concat(x, y), given)).support();
  const auto yz = d.marginal(concat(y, given)).support();
  const auto xz = d.marginal(concat(x, given)).support();
  const auto z = d.marginal(given).support();
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  // Σ_{x,y,z} p(x,y,z) log [p(x | y,z) / p(x | z)].
  Real total = 0;
  for (const auto& [o, p] : xyz) {
    if (!(p > 0)) continue;
    const Outcome ox(o.begin(), o.begin() + static_cast<std::ptrdiff_t>(nx));
    const Outcome oy(o.begin() + static_cast<std::ptrdiff_t>(nx), o.begin() + static_cast<std::ptrdiff_t>(nx + ny));
    const Outcome oz(o.begin() + static_cast<std::ptrdiff_t>(nx + ny), o.end());
    const Real p_x_given_yz = p / yz.at(concat(oy, oz));
    const Real p_x_given_z = xz.at(concat(ox, oz)) / z.at(oz);
    total += p * std::log2(p_x_given_yz / p_x_given_z);
  }
  return total;
}

Divergence divergences(const JointDistribution& p, const JointDistribution& q) {
  if (p.names() != q.names()) throw std::invalid_argument("divergences: distributions over different variables");
  std::set<Outcome> omega;
  for (const auto& [x, _] : p.support()) omega.insert(x);
  for (const auto& [x, _] : q.support()) omega.insert(x);
  const auto get = [](const JointDistribution& d, const Outcome& x) {
    const auto it = d.support().find(x);
    return it == d.support().end() ? Real(0) : it->second;
  };
  Divergence out;
  Real l1 = 0;
  for (const auto& x : omega) {
    const Real px = get(p, x);
    const Real qx = get(q, x);
    l1 += std::fabs(px - qx);
    if (px > 0) {
      if (qx > 0) {
        out.kl += px * std::log2(px / qx);
      } else {
        out.kl_infinite = true;
      }
    }
  }
  out.tvd = l1 / 2;
  return out;
}

Real tvd_by_events(const JointDistribution& p, const JointDistribution& q) {
  if (p.names() != q.names()) throw std::invalid_argument("tvd_by_events: distributions over different variables");
  std::set<Outcome> omega;
  for (const auto& [x, _] : p.support()) omega.insert(x);
  for (const auto& [x, _] : q.support()) omega.insert(x);
  if (omega.size() > 20) throw std::invalid_argument("tvd_by_events: support larger than 20 outcomes");
  std::vector<Real> diff;
  for (const auto& x : omega) {
    const auto ip = p.support().find(x);
    const auto iq = q.support().find(x);
    diff.push_back((ip == p.support().end() ? 0 : ip->second) - (iq == q.support().end() ? 0 : iq->second));
  }
  Real best = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << diff.size()); ++mask) {
    Real s = 0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
      if (mask >> i & 1u) s += diff[i];
    }
    best = std::max(best, s);
  }
  return best;
}

JointDistribution random_joint(const VarList& names, const std::vector<int>& arities, RngStream& rng) {
  if (names.size() != arities.size()) throw std::invalid_argument("random_joint: names and arities differ in length");
  std::size_t cells = 1;
  for (int a : arities) {
    if (a < 1) throw std::invalid_argument("random_joint: arity must be positive");
    cells *= static_cast<std::size_t>(a);
  }
  std::vector<Real> w(cells);
  Real total = 0;
  for (auto& x : w) {
    // A quarter of the cells are structural zeros, so conditioning on
    // zero-probability slices and 0 log 0 terms both occur.
    x = rng.uniform_below(4) == 0 ? 0 : static_cast<Real>(rng.uniform01());
    total += x;
  }
  if (!(total > 0)) {
    w[0] = 1;
    total = 1;
  }
  std::vector<std::pair<Outcome, Real>> support;
  for (std::size_t c = 0; c < cells; ++c) {
    Outcome o(arities.size());
    std::size_t r = c;
    for (std::size_t k = arities.size(); k-- > 0;) {
      o[k] = static_cast<int>(r % static_cast<std::size_t>(arities[k]));
      r /= static_cast<std::size_t>(arities[k]);
    }
    support.emplace_back(std::move(o), w[c] / total);
  }
  return JointDistribution(names, support);
}

bool IdentityReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.failures == 0; });
}

namespace {

class Recorder {
 public:
  explicit Recorder(Real tol) : tol_(tol) {}

  void equal(const std::string& name, Real lhs, Real rhs) { record(name, std::fabs(lhs - rhs)); }
  void at_most(const std::string& name, Real lhs, Real rhs) { record(name, lhs - rhs); }

  IdentityReport finish() {
    IdentityReport r;
    r.tolerance = tol_;
    for (const auto& name : order_) r.checks.push_back(checks_.at(name));
    return r;
  }

 private:
  void record(const std::string& name, Real violation) {
    auto [it, inserted] = checks_.try_emplace(name);
    if (inserted) {
      order_.push_back(name);
      it->second.name = name;
      it->second.worst = violation;
    }
    auto& c = it->second;
    ++c.cases;
    c.worst = std::max(c.worst, violation);
    if (!(violation <= tol_)) ++c.failures;
  }

  Real tol_;
  std::vector<std::string> order_;
  std::map<std::string, IdentityCheck> checks_;
};

JointDistribution uniform_index(const std::string& name, int n) {
  std::vector<std::pair<Outcome, Real>> s;
  for (int i = 0; i < n; ++i) s.push_back({{i}, Real(1) / n});
  return JointDistribution({name}, s);
}

JointDistribution bernoulli(const std::string& name, Real p1) {
  return JointDistribution({name}, {{{0}, 1 - p1}, {{1}, p1}});
}

/// Joint of (X_1..X_n, Y, I, XI, F) for the index-information bound.
/// `f` maps the packed bits of X (X_1 least significant) and y to a value.
void check_index_info(Recorder& rec, const std::string& name, int n, Real bias, const JointDistribution& y,
                      const std::function<int(int, int)>& f) {
  JointDistribution d = bernoulli("X1", bias);
  VarList xs{"X1"};
  for (int i = 2; i <= n; ++i) {
    xs.push_back("X" + std::to_string(i));
    d = product(d, bernoulli(xs.back(), bias));
  }
  d = product(product(d, y), uniform_index("I", n));
  VarList all = xs;
  all.push_back("I");
  d = d.with_function("XI", all, [n](const Outcome& o) { return o[static_cast<std::size_t>(o[static_cast<std::size_t>(n)])]; });
  VarList fx = xs;
  fx.push_back("Y");
  d = d.with_function("F", fx, [n, &f](const Outcome& o) {
    int packed = 0;
    for (int i = 0; i < n; ++i) packed |= o[static_cast<std::size_t>(i)] << i;
    return f(packed, o[static_cast<std::size_t>(n)]);
  });
  const Real lhs = mutual_info(d, {"XI"}, {"F"}, {"Y", "I"});
  const Real rhs = mutual_info(d, xs, {"F"}, {"Y"}) / n;
  rec.at_most(name, lhs, rhs);
}

}  // namespace

IdentityReport verify_identities(std::size_t trials, RngStream& rng) {
  if (trials == 0) throw std::invalid_argument("verify_identities: trials must be at least 1");
  Recorder rec(1e-9L);
  const VarList names{"W", "X", "Y", "Z"};
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<int> ar;
    for (int k = 0; k < 4; ++k) ar.push_back(2 + static_cast<int>(rng.uniform_below(3)));
    const auto d = random_joint(names, ar, rng);

    for (std::size_t k = 0; k < 4; ++k) {
      const Real h = entropy(d, {names[k]});
      rec.at_most("entropy nonnegative", -h, 0);
      rec.at_most("entropy at most log of range", h, std::log2(static_cast<Real>(ar[k])));
    }
    const Real hx = entropy(d, {"X"});
    const Real hy = entropy(d, {"Y"});
    const Real hxy = entropy(d, {"X", "Y"});
    rec.equal("joint entropy chain", hxy, hx + conditional_entropy(d, {"Y"}, {"X"}));
    rec.equal("conditional entropy by difference", conditional_entropy(d, {"Y"}, {"X"}), hxy - hx);
    rec.at_most("subadditivity", hxy, hx + hy);

    const Real ixy_z = mutual_info(d, {"X"}, {"Y"}, {"Z"});
    rec.at_most("mutual information nonnegative", -ixy_z, 0);
    rec.at_most("mutual information at most entropy", ixy_z, hx);
    rec.equal("mutual information symmetric", ixy_z, mutual_info(d, {"Y"}, {"X"}, {"Z"}));
    rec.equal("mutual information as expected KL", ixy_z, mutual_info_kl(d, {"X"}, {"Y"}, {"Z"}));

    rec.equal("chain rule", mutual_info(d, {"W", "X"}, {"Y"}, {"Z"}),
              mutual_info(d, {"W"}, {"Y"}, {"Z"}) + mutual_info(d, {"X"}, {"Y"}, {"W", "Z"}));

    // A random deterministic f on Y's range.
    std::vector<int> table(static_cast<std::size_t>(ar[2]));
    for (auto& v : table) v = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(ar[2])));
    const auto df = d.with_function("fY", {"Y"}, [&table](const Outcome& o) { return table[static_cast<std::size_t>(o[0])]; });
    rec.at_most("data processing", mutual_info(df, {"X"}, {"fY"}, {"Z"}), ixy_z);

    const Real lhs = std::max(mutual_info(d, {"W"}, {"X"}, {"Y", "Z"}), mutual_info(d, {"Y"}, {"X"}, {"Z"}));
    rec.at_most("max-of-informations bound", lhs,
                mutual_info(d, {"W"}, {"X"}, {"Z"}) + mutual_info(d, {"Y"}, {"X"}, {"W", "Z"}));

    // Independence: product marginals carry zero information.
    const auto indep = product(d.marginal({"X"}), d.marginal({"Y"}));
    rec.at_most("independent implies zero information", mutual_info(indep, {"X"}, {"Y"}), 0);

    // Pinsker on two random laws over the same range. Natural-log KL is the
    // tighter form; the base-2 form follows from it.
    const int r = 2 + static_cast<int>(rng.uniform_below(4));
    const auto p = random_joint({"V"}, {r}, rng);
    const auto q = random_joint({"V"}, {r}, rng);
    const auto dv = divergences(p, q);
    if (!dv.kl_infinite) {
      rec.at_most("Pinsker (nats)", dv.tvd, std::sqrt(dv.kl * std::log(Real(2)) / 2));
      rec.at_most("Pinsker (bits)", dv.tvd, std::sqrt(dv.kl / 2));
    }
    rec.equal("TVD half L1 equals max over events", dv.tvd, tvd_by_events(p, q));
  }

  // Index information, n = 2: every f : {0,1}^2 × {0,1} → {0,1}.
  for (int law = 0; law < 4; ++law) {
    const Real bias = static_cast<Real>(rng.uniform01());
    const auto y = random_joint({"Y"}, {2}, rng);
    for (int fcode = 0; fcode < 256; ++fcode) {
      check_index_info(rec, "index information n=2 exhaustive", 2, bias, y,
                       [fcode](int x, int yv) { return (fcode >> (x * 2 + yv)) & 1; });
    }
  }
  // n = 3: random f with up to four output values.
  for (std::size_t t = 0; t < std::max<std::size_t>(trials / 4, 1); ++t) {
    const Real bias = static_cast<Real>(rng.uniform01());
    const auto y = random_joint({"Y"}, {3}, rng);
    const auto range = 2 + rng.uniform_below(3);
    std::vector<int> table(8 * 3);
    for (auto& v : table) v = static_cast<int>(rng.uniform_below(range));
    check_index_info(rec, "index information n=3 random", 3, bias, y,
                     [&table](int x, int yv) { return table[static_cast<std::size_t>(x * 3 + yv)]; });
  }
  return rec.finish();
}

}  // namespace xoslab::info
