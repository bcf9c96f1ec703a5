#include "xoslab/construction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace xoslab {

namespace {

// Printed vectors at m = 16; everything else is scaled by m/16.
constexpr std::array<std::size_t, 4> kBasis{5, 3, 3, 5};
constexpr std::array<std::size_t, 16> kCmp{4, 1, 0, 0, 0, 1, 2, 0, 1, 0, 1, 1, 0, 1, 0, 4};
constexpr std::array<std::size_t, 4> kReg{2, 1, 2, 3};
constexpr std::array<std::size_t, 4> kRegPair{0, 0, 1, 1};
constexpr std::array<std::size_t, 16> kSpec1{2, 0, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 2};
constexpr std::array<std::size_t, 16> kSpec2{2, 0, 0, 0, 0, 0, 2, 0, 1, 0, 0, 0, 0, 1, 0, 2};
// 1 at the cells (1,0,0,0) and (1,1,0,1).
constexpr std::array<std::size_t, 16> kSpecPair{0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0};

std::size_t scale_of(std::size_t m) {
  if (m == 0 || m % 16 != 0) {
    throw std::invalid_argument("item count m = " + std::to_string(m) +
                                " must be a positive multiple of 16");
  }
  return m / 16;
}

template <std::size_t N>
Profile scaled(const std::array<std::size_t, N>& v, std::size_t unit) {
  Profile out(v.begin(), v.end());
  for (auto& x : out) x *= unit;
  return out;
}

Profile scaled(const Profile& v, std::size_t unit) {
  Profile out(v);
  for (auto& x : out) x *= unit;
  return out;
}

std::vector<Profile> scaled(const std::vector<Profile>& rows, std::size_t unit) {
  std::vector<Profile> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(scaled(r, unit));
  return out;
}

// Swaps the two bits of a 2-bit cell index: (b1, b2) -> (b2, b1).
constexpr std::size_t swap2(std::size_t c) { return ((c & 1u) << 1) | (c >> 1); }

// Row c, column q of a four-class split into (neither, second only,
// first only, both), from the marginal sizes of the two sets and their overlap.
Profile four_way(long long size, long long first, long long second, long long both,
                 const std::string& what) {
  const long long only_first = first - both;
  const long long only_second = second - both;
  const long long neither = size - first - second + both;
  if (only_first < 0 || only_second < 0 || neither < 0 || both < 0) {
    throw std::logic_error("derived class counts for " + what + " are negative");
  }
  return {static_cast<std::size_t>(neither), static_cast<std::size_t>(only_second),
          static_cast<std::size_t>(only_first), static_cast<std::size_t>(both)};
}

Profile flatten(const std::vector<Profile>& rows) {
  Profile out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

ReferenceConfiguration build_reference() {
  const std::size_t m = 16;
  ReferenceConfiguration r;
  r.S = {ItemSet(m, {0, 1, 2, 6, 8, 9, 10, 11}), ItemSet(m, {3, 4, 5, 6, 8, 9, 10, 11})};
  r.T = {ItemSet(m, {1, 2, 3, 4, 8, 9, 10, 11}), ItemSet(m, {1, 5, 6, 7, 8, 9, 10, 11})};
  r.a1 = ItemSet(m, {0, 2, 5, 6, 8, 9, 14, 15});
  r.a2 = ItemSet(m, {0, 3, 4, 6, 10, 11, 12, 13});
  return r;
}

struct UnitData {
  Profile pair_profile;
  Profile opt_profile;
  ClassCountTables tables;
};

// Derives the m = 16 tables from the printed vectors and checks them against
// profiles measured on the reference configuration.
UnitData derive_unit_data() {
  const auto& ref = reference_configuration();
  UnitData d;
  d.pair_profile = part_profile(std::vector<ItemSet>{ref.S.s1, ref.S.s2, ref.a1, ref.a2});
  d.opt_profile = part_profile(std::vector<ItemSet>{ref.S.s1, ref.S.s2, ref.T.s1, ref.T.s2, ref.a1, ref.a2});

  auto& t = d.tables;
  t.basis = {Profile(kBasis.begin(), kBasis.end())};
  for (std::size_t c = 0; c < 4; ++c) {
    t.compatible.emplace_back(kCmp.begin() + 4 * c, kCmp.begin() + 4 * c + 4);
  }
  // A¹ is a clause w.r.t. S, A² w.r.t. S^rev (so S-cell c reads reg at the
  // swapped index), and the overlap follows regpair.
  for (std::size_t c = 0; c < 4; ++c) {
    t.clause_pair.push_back(four_way(static_cast<long long>(kBasis[c]), static_cast<long long>(kReg[c]),
                                     static_cast<long long>(kReg[swap2(c)]),
                                     static_cast<long long>(kRegPair[c]), "clause pairs"));
  }
  for (std::size_t c = 0; c < 16; ++c) {
    t.special.push_back(four_way(static_cast<long long>(kCmp[c]), static_cast<long long>(kSpec1[c]),
                                 static_cast<long long>(kSpec2[c]),
                                 static_cast<long long>(kSpecPair[c]), "special pairs"));
  }
  // Reindex opt_profile from S‖T‖A cells to (S‖A cell, T pattern).
  t.opt_completion.assign(16, Profile(4, 0));
  for (std::size_t idx = 0; idx < 64; ++idx) {
    const std::size_t s = idx >> 4;
    const std::size_t tt = (idx >> 2) & 3u;
    const std::size_t a = idx & 3u;
    t.opt_completion[s * 4 + a][tt] = d.opt_profile[idx];
  }

  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::logic_error("construction constants inconsistent: " + what);
  };
  require(part_profile(std::vector<ItemSet>{ref.S.s1, ref.S.s2}) == scaled(kBasis, 1),
          "reference S is not a basis");
  require(part_profile(std::vector<ItemSet>{ref.S.s1, ref.S.s2, ref.T.s1, ref.T.s2}) == scaled(kCmp, 1),
          "reference (S, T) does not have the compatible profile");
  require(flatten(t.clause_pair) == d.pair_profile,
          "clause-pair class counts disagree with the reference pair profile");
  require(flatten(t.special) == d.opt_profile,
          "special-pair class counts disagree with the reference opt profile");
  for (std::size_t b = 0; b < 16; ++b) {
    std::size_t row = 0;
    for (auto x : t.opt_completion[b]) row += x;
    require(row == d.pair_profile[b], "opt profile does not marginalize to the pair profile");
  }
  Profile t_basis(4, 0);
  for (const auto& row : t.opt_completion) {
    for (std::size_t q = 0; q < 4; ++q) t_basis[q] += row[q];
  }
  require(t_basis == scaled(kBasis, 1), "opt completion does not yield a basis");
  return d;
}

const UnitData& unit_data() {
  static const UnitData data = derive_unit_data();
  return data;
}

// Splits each cell of Part(base) into the 2^j membership patterns of j new
// sets according to `rows`, then reassembles the new sets.
std::vector<ItemSet> sample_joint(std::size_t universe, std::span<const ItemSet> base,
                                  const std::vector<Profile>& rows, std::size_t j, RngStream& rng) {
  const auto cells = part_cells(universe, base);
  const auto classes = refine_sample(cells, rows, rng);
  std::vector<ItemSet> out(j, ItemSet(universe));
  for (std::size_t q = 0; q < classes.size(); ++q) {
    for (std::size_t t = 0; t < j; ++t) {
      if ((q >> (j - 1 - t)) & 1u) out[t] |= classes[q];
    }
  }
  return out;
}

}  // namespace

const ReferenceConfiguration& reference_configuration() {
  static const ReferenceConfiguration ref = build_reference();
  return ref;
}

ConstantVectors constant_vectors(std::size_t m) {
  const std::size_t unit = scale_of(m);
  const auto& u = unit_data();
  ConstantVectors v;
  v.m = m;
  v.basis = scaled(kBasis, unit);
  v.cmp = scaled(kCmp, unit);
  v.reg = scaled(kReg, unit);
  v.regpair = scaled(kRegPair, unit);
  v.spec1 = scaled(kSpec1, unit);
  v.spec2 = scaled(kSpec2, unit);
  v.specpair = scaled(kSpecPair, unit);
  v.pair_profile = scaled(u.pair_profile, unit);
  v.opt_profile = scaled(u.opt_profile, unit);
  return v;
}

ClassCountTables class_count_tables(std::size_t m) {
  const std::size_t unit = scale_of(m);
  const auto& t = unit_data().tables;
  return {scaled(t.basis, unit), scaled(t.compatible, unit), scaled(t.clause_pair, unit),
          scaled(t.special, unit), scaled(t.opt_completion, unit)};
}

bool validate_profile(std::span<const ItemSet> sets, const Profile& expected) {
  if (sets.empty()) return expected.empty() || expected.size() == 1;
  const auto prof = part_profile(sets);
  return prof == expected;
}

bool is_basis(const Basis& b) {
  if (b.s1.universe() != b.s2.universe() || b.universe() % 16 != 0 || b.universe() == 0) return false;
  return validate_profile(b.sets(), constant_vectors(b.universe()).basis);
}

bool is_compatible(const Basis& S, const Basis& T) {
  if (!is_basis(S) || !is_basis(T) || S.universe() != T.universe()) return false;
  return validate_profile(std::vector<ItemSet>{S.s1, S.s2, T.s1, T.s2}, constant_vectors(S.universe()).cmp);
}

bool is_clause(const ItemSet& a, const Basis& S) {
  if (a.universe() != S.universe() || !is_basis(S)) return false;
  return part_profile(S.sets(), a) == constant_vectors(S.universe()).reg;
}

bool is_clause_pair(const ItemSet& a1, const ItemSet& a2, const Basis& S) {
  if (!is_clause(a1, S) || !is_clause(a2, S.reversed())) return false;
  const ItemSet both = a1 & a2;
  return part_profile(S.sets(), both) == constant_vectors(S.universe()).regpair;
}

bool is_special_pair(const ItemSet& a1, const ItemSet& a2, const Basis& S, const Basis& T) {
  if (!is_compatible(S, T) || a1.universe() != S.universe() || a2.universe() != S.universe()) return false;
  const auto cv = constant_vectors(S.universe());
  const std::vector<ItemSet> st{S.s1, S.s2, T.s1, T.s2};
  return part_profile(st, a1) == cv.spec1 && part_profile(st, a2) == cv.spec2 &&
         part_profile(st, a1 & a2) == cv.specpair;
}

Basis sample_basis(std::size_t m, RngStream& rng) {
  const auto t = class_count_tables(m);
  const auto sets = sample_joint(m, {}, t.basis, 2, rng);
  return {sets[0], sets[1]};
}

Basis sample_compatible(const Basis& S, RngStream& rng) {
  if (!is_basis(S)) throw std::invalid_argument("sample_compatible: S is not a basis");
  const auto t = class_count_tables(S.universe());
  const auto sets = sample_joint(S.universe(), S.sets(), t.compatible, 2, rng);
  return {sets[0], sets[1]};
}

std::pair<ItemSet, ItemSet> sample_clause_pair(const Basis& S, RngStream& rng) {
  if (!is_basis(S)) throw std::invalid_argument("sample_clause_pair: S is not a basis");
  const auto t = class_count_tables(S.universe());
  auto sets = sample_joint(S.universe(), S.sets(), t.clause_pair, 2, rng);
  return {std::move(sets[0]), std::move(sets[1])};
}

std::pair<ItemSet, ItemSet> sample_special_pair(const Basis& S, const Basis& T, RngStream& rng) {
  if (!is_compatible(S, T)) throw std::invalid_argument("sample_special_pair: S is not compatible with T");
  const auto t = class_count_tables(S.universe());
  auto sets = sample_joint(S.universe(), std::vector<ItemSet>{S.s1, S.s2, T.s1, T.s2}, t.special, 2, rng);
  return {std::move(sets[0]), std::move(sets[1])};
}

Basis sample_opt_completion(const Basis& S, const ItemSet& a1, const ItemSet& a2, RngStream& rng) {
  if (!is_clause_pair(a1, a2, S)) {
    throw std::invalid_argument("sample_opt_completion: (a1, a2) is not a clause pair w.r.t. S");
  }
  const auto t = class_count_tables(S.universe());
  const auto sets =
      sample_joint(S.universe(), std::vector<ItemSet>{S.s1, S.s2, a1, a2}, t.opt_completion, 2, rng);
  return {sets[0], sets[1]};
}

std::string to_string(Variant v) { return v == Variant::Nu ? "nu" : "nu_prime"; }

Variant parse_variant(const std::string& s) {
  if (s == "nu") return Variant::Nu;
  if (s == "nu_prime") return Variant::NuPrime;
  throw std::invalid_argument("unknown variant '" + s + "' (expected nu or nu_prime)");
}

namespace {

void sample_selectors(Instance& inst, RngStream& rng) {
  inst.theta = 1 + static_cast<int>(rng.uniform_below(2));
  inst.rA.assign(inst.n, 1);
  inst.rB.assign(inst.n, 1);
  for (std::size_t i = 0; i < inst.n; ++i) {
    inst.rA[i] = 1 + static_cast<int>(rng.uniform_below(2));
    inst.rB[i] = 1 + static_cast<int>(rng.uniform_below(2));
  }
  inst.rA[inst.i_star] = inst.theta;
  inst.rB[inst.i_star] = inst.theta;
}

}  // namespace

Instance sample_instance(std::size_t m, std::size_t n, Variant variant, RngStream& rng) {
  scale_of(m);
  if (n == 0) throw std::invalid_argument("sample_instance: n must be at least 1");
  Instance inst;
  inst.m = m;
  inst.n = n;
  inst.variant = variant;
  inst.seed = rng.seed();
  inst.A1.assign(n, ItemSet(m));
  inst.A2.assign(n, ItemSet(m));
  inst.B1.assign(n, ItemSet(m));
  inst.B2.assign(n, ItemSet(m));

  if (variant == Variant::Nu) {
    inst.S = sample_basis(m, rng);
    inst.T = sample_compatible(inst.S, rng);
    inst.i_star = static_cast<std::size_t>(rng.uniform_below(n));
    const Basis t_rev = inst.T.reversed();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == inst.i_star) continue;
      std::tie(inst.A1[i], inst.A2[i]) = sample_clause_pair(inst.S, rng);
      std::tie(inst.B2[i], inst.B1[i]) = sample_clause_pair(t_rev, rng);
    }
    std::tie(inst.A1[inst.i_star], inst.A2[inst.i_star]) = sample_special_pair(inst.S, inst.T, rng);
  } else {
    inst.S = sample_basis(m, rng);
    for (std::size_t i = 0; i < n; ++i) std::tie(inst.A1[i], inst.A2[i]) = sample_clause_pair(inst.S, rng);
    inst.i_star = static_cast<std::size_t>(rng.uniform_below(n));
    inst.T = sample_opt_completion(inst.S, inst.A1[inst.i_star], inst.A2[inst.i_star], rng);
    const Basis t_rev = inst.T.reversed();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == inst.i_star) continue;
      std::tie(inst.B2[i], inst.B1[i]) = sample_clause_pair(t_rev, rng);
    }
  }
  inst.B1[inst.i_star] = inst.A1[inst.i_star].complement();
  inst.B2[inst.i_star] = inst.A2[inst.i_star].complement();
  sample_selectors(inst, rng);
  return inst;
}

std::optional<std::string> check_instance(const Instance& inst) {
  const auto fail = [](std::string msg) { return std::optional<std::string>(std::move(msg)); };
  if (inst.m == 0 || inst.m % 16 != 0) return fail("m = " + std::to_string(inst.m) + " is not a positive multiple of 16");
  if (inst.n == 0) return fail("n must be at least 1");
  for (const auto* seq : {&inst.A1, &inst.A2, &inst.B1, &inst.B2}) {
    if (seq->size() != inst.n) return fail("clause sequence length differs from n");
    for (const auto& s : *seq) {
      if (s.universe() != inst.m) return fail("clause over the wrong universe");
      if (s.count() != inst.m / 2) return fail("clause of size " + std::to_string(s.count()) + ", expected m/2");
    }
  }
  if (inst.rA.size() != inst.n || inst.rB.size() != inst.n) return fail("selector length differs from n");
  if (inst.S.universe() != inst.m || inst.T.universe() != inst.m) return fail("basis over the wrong universe");
  if (!is_basis(inst.S)) return fail("S is not a basis");
  if (!is_basis(inst.T)) return fail("T is not a basis");
  if (!is_compatible(inst.S, inst.T)) return fail("S is not compatible with T");
  if (inst.i_star >= inst.n) return fail("i_star out of range");
  const Basis t_rev = inst.T.reversed();
  for (std::size_t i = 0; i < inst.n; ++i) {
    const std::string at = " at index " + std::to_string(i + 1);
    if (i == inst.i_star) {
      if (!is_special_pair(inst.A1[i], inst.A2[i], inst.S, inst.T)) return fail("(A1, A2) is not special" + at);
      if (inst.B1[i] != inst.A1[i].complement()) return fail("B1 is not the complement of A1" + at);
      if (inst.B2[i] != inst.A2[i].complement()) return fail("B2 is not the complement of A2" + at);
    } else {
      if (!is_clause_pair(inst.A1[i], inst.A2[i], inst.S)) return fail("(A1, A2) is not a clause pair w.r.t. S" + at);
      if (!is_clause_pair(inst.B2[i], inst.B1[i], t_rev)) return fail("(B2, B1) is not a clause pair w.r.t. T^rev" + at);
    }
    if ((inst.rA[i] != 1 && inst.rA[i] != 2) || (inst.rB[i] != 1 && inst.rB[i] != 2)) {
      return fail("selector outside {1,2}" + at);
    }
  }
  if (inst.theta != 1 && inst.theta != 2) return fail("theta outside {1,2}");
  if (inst.rA[inst.i_star] != inst.theta || inst.rB[inst.i_star] != inst.theta) {
    return fail("rA[i_star] and rB[i_star] must equal theta");
  }
  return std::nullopt;
}

GeneralizedDeltas generalized_deltas(const Rational& u, const Rational& v) {
  if (u <= 0 || v <= 0) throw std::invalid_argument("generalized_deltas: u and v must be positive");
  const Rational a = u + 2 * v;
  const Rational b = 2 * u + v;
  GeneralizedDeltas d;
  d.single = (2 * v * v * v + 2 * u * u * v + 3 * u * v * v) / (a * a * a);
  d.cross = (5 * u * u * v + u * u * u + 6 * u * v * v + 2 * v * v * v) / (2 * a * a * b);
  d.special = (16 * u * v + 5 * u * u + 6 * v * v) / (12 * a * b);
  return d;
}

namespace {

double cross_at(double x) {
  return (5 * x + 1 + 6 * x * x + 2 * x * x * x) / (2 * (1 + 2 * x) * (1 + 2 * x) * (2 + x));
}
double special_at(double x) { return (16 * x + 5 + 6 * x * x) / (12 * (1 + 2 * x) * (2 + x)); }
double objective(double x) { return std::min(cross_at(x), special_at(x)); }

}  // namespace

double optimal_block_ratio() {
  constexpr double lo = 0.01;
  constexpr double hi = 20.0;
  constexpr int steps = 20000;
  const double h = (hi - lo) / steps;
  int best = 0;
  for (int i = 1; i <= steps; ++i) {
    if (objective(lo + i * h) > objective(lo + best * h)) best = i;
  }
  double a = lo + std::max(best - 1, 0) * h;
  double b = lo + std::min(best + 1, steps) * h;
  const auto gap = [](double x) { return cross_at(x) - special_at(x); };
  if (gap(a) * gap(b) < 0) {
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double mid = 0.5 * (a + b);
      if (gap(a) * gap(mid) <= 0) {
        b = mid;
      } else {
        a = mid;
      }
    }
    return 0.5 * (a + b);
  }
  // Smooth interior maximum: golden-section search.
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    if (objective(c) < objective(d)) {
      a = c;
    } else {
      b = d;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace xoslab

namespace xoslab {

CrossDeltas exact_cross_deltas(const Basis& S, const Basis& T) {
  if (!is_compatible(S, T)) throw std::invalid_argument("exact_cross_deltas: S is not compatible with T");
  const auto cv = constant_vectors(S.universe());
  const std::array<PartitionParameter, 2> a{PartitionParameter::from_sets(S.sets(), cv.reg),
                                            PartitionParameter::from_sets(S.reversed().sets(), cv.reg)};
  const std::array<PartitionParameter, 2> b{PartitionParameter::from_sets(T.sets(), cv.reg),
                                            PartitionParameter::from_sets(T.reversed().sets(), cv.reg)};
  const std::vector<ItemSet> st{S.s1, S.s2, T.s1, T.s2};
  const auto cells = part_cells(st);
  Profile comp1(cv.cmp.size());
  Profile comp2(cv.cmp.size());
  for (std::size_t c = 0; c < cv.cmp.size(); ++c) {
    comp1[c] = cv.cmp[c] - cv.spec1[c];
    comp2[c] = cv.cmp[c] - cv.spec2[c];
  }
  const std::array<PartitionParameter, 2> a_star{PartitionParameter(cells, cv.spec1),
                                                 PartitionParameter(cells, cv.spec2)};
  const std::array<PartitionParameter, 2> b_star{PartitionParameter(cells, comp1),
                                                 PartitionParameter(cells, comp2)};
  CrossDeltas d;
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t jp = 0; jp < 2; ++jp) d.regular[2 * j + jp] = expected_intersection(a[j], b[jp]);
    d.special_a[j] = expected_intersection(a_star[j], b[1 - j]);
    d.special_b[j] = expected_intersection(a[1 - j], b_star[j]);
  }
  return d;
}

}  // namespace xoslab
