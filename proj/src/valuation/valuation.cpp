#include "xoslab/valuation.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace xoslab {

BXOSValuation::BXOSValuation(const std::vector<ItemSet>& clauses) {
  if (clauses.empty()) throw std::invalid_argument("a BXOS valuation needs at least one clause");
  universe_ = clauses.front().universe();
  count_ = clauses.size();
  stride_ = clauses.front().word_count();
  storage_.reserve(count_ * stride_);
  for (const auto& c : clauses) {
    if (c.universe() != universe_) throw std::invalid_argument("BXOS clauses over mismatched universes");
    const auto w = c.words();
    storage_.insert(storage_.end(), w.begin(), w.end());
  }
}

ItemSet BXOSValuation::clause(std::size_t i) const {
  if (i >= count_) throw std::out_of_range("clause index out of range");
  ItemSet out(universe_);
  const auto r = row(i);
  std::copy(r.begin(), r.end(), out.mutable_words().begin());
  return out;
}

std::vector<ItemSet> BXOSValuation::clauses() const {
  std::vector<ItemSet> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) out.push_back(clause(i));
  return out;
}

void BXOSValuation::require_universe(const ItemSet& z) const {
  if (z.universe() != universe_) {
    throw std::invalid_argument("valuation over " + std::to_string(universe_) +
                                " items evaluated on a set over " + std::to_string(z.universe()));
  }
}

std::size_t BXOSValuation::eval(const ItemSet& z) const {
  require_universe(z);
  std::size_t best = 0;
  for (std::size_t i = 0; i < count_; ++i) best = std::max(best, intersection_count(row(i), z.words()));
  return best;
}

std::size_t BXOSValuation::best_clause(const ItemSet& z) const {
  require_universe(z);
  std::size_t best = 0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < count_; ++i) {
    const std::size_t v = intersection_count(row(i), z.words());
    if (v > best || i == 0) {
      best = v;
      arg = i;
    }
  }
  return arg;
}

void require_disjoint(const Allocation& a) {
  if (a.to_alice.universe() != a.to_bob.universe()) {
    throw std::logic_error("allocation bundles over different universes");
  }
  if (intersection_count(a.to_alice, a.to_bob) != 0) {
    throw std::logic_error("allocation gives some item to both bidders");
  }
}

std::size_t welfare(const BXOSValuation& vA, const BXOSValuation& vB, const Allocation& a) {
  return vA.eval(a.to_alice) + vB.eval(a.to_bob);
}

OptResult opt_clause_pair(const BXOSValuation& vA, const BXOSValuation& vB) {
  if (vA.universe() != vB.universe()) throw std::invalid_argument("opt: valuations over different universes");
  const auto a = vA.clauses();
  const auto b = vB.clauses();
  OptResult best;
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t u = union_count(a[i], b[j]);
      if (first || u > best.value) {
        best = {i, j, u};
        first = false;
      }
    }
  }
  return best;
}

Allocation opt_allocation(const BXOSValuation& vA, const BXOSValuation& /*vB*/, const OptResult& r) {
  Allocation out{vA.clause(r.clause_a), ItemSet(vA.universe())};
  out.to_bob = out.to_alice.complement();
  return out;
}

std::size_t opt_bruteforce(const BXOSValuation& vA, const BXOSValuation& vB) {
  const std::size_t m = vA.universe();
  if (m != vB.universe()) throw std::invalid_argument("opt: valuations over different universes");
  if (m > 24) throw std::invalid_argument("opt_bruteforce is limited to m <= 24, got " + std::to_string(m));
  std::size_t best = 0;
  ItemSet z(m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    z.mutable_words()[0] = mask;
    best = std::max(best, vA.eval(z) + vB.eval(z.complement()));
  }
  return best;
}

InstanceValuations build_valuations(const Instance& inst) {
  std::vector<ItemSet> fa, fb;
  for (std::size_t i = 0; i < inst.n; ++i) {
    fa.push_back(inst.A(inst.rA[i], i));
    fb.push_back(inst.B(inst.rB[i], i));
  }
  auto aux = [&](const std::vector<ItemSet>& s1, const std::vector<ItemSet>& s2, int j) {
    std::vector<ItemSet> out;
    out.reserve(2 * inst.n - 1);
    for (std::size_t i = 0; i < inst.n; ++i) {
      // Drop copy 3−j at the special index.
      if (i != inst.i_star || j == 1) out.push_back(s1[i]);
      if (i != inst.i_star || j == 2) out.push_back(s2[i]);
    }
    return BXOSValuation(out);
  };
  return {BXOSValuation(fa), BXOSValuation(fb),
          {aux(inst.A1, inst.A2, 1), aux(inst.A1, inst.A2, 2)},
          {aux(inst.B1, inst.B2, 1), aux(inst.B1, inst.B2, 2)}};
}

std::string to_string(ThetaRecovery r) {
  switch (r) {
    case ThetaRecovery::One: return "1";
    case ThetaRecovery::Two: return "2";
    case ThetaRecovery::None: return "none";
    case ThetaRecovery::Ambiguous: return "ambiguous";
  }
  return "?";
}

ThetaEvidence recover_theta(const InstanceValuations& vals, const ItemSet& z, double eps) {
  const std::size_t m = vals.vA.universe();
  const ItemSet zbar = z.complement();
  ThetaEvidence ev;
  ev.threshold = 179.0 * static_cast<double>(m) / 240.0 + eps * static_cast<double>(m);
  std::array<bool, 2> good{};
  for (std::size_t j = 0; j < 2; ++j) {
    ev.q[j] = vals.aux_a[j].eval(z) + vals.aux_b[j].eval(zbar);
    good[j] = static_cast<double>(ev.q[j]) > ev.threshold;
  }
  if (good[0] && good[1]) {
    ev.result = ThetaRecovery::Ambiguous;
  } else if (good[0]) {
    ev.result = ThetaRecovery::One;
  } else if (good[1]) {
    ev.result = ThetaRecovery::Two;
  } else {
    ev.result = ThetaRecovery::None;
  }
  return ev;
}

ThetaEvidence recover_theta(const Instance& inst, const ItemSet& z, double eps) {
  return recover_theta(build_valuations(inst), z, eps);
}

ConcentrationEvents detect_events(const Instance& inst, double eps) {
  const double m = static_cast<double>(inst.m);
  const double reg_bound = 51.0 * m / 200.0 - eps * m;
  const double spec_bound = 61.0 * m / 240.0 - eps * m;
  ConcentrationEvents ev;
  ev.min_regular = ev.min_special_a = ev.min_special_b = inst.m;
  const std::size_t s = inst.i_star;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (i == s) continue;
    for (int j = 1; j <= 2; ++j) {
      for (std::size_t ip = 0; ip < inst.n; ++ip) {
        if (ip == s) continue;
        for (int jp = 1; jp <= 2; ++jp) {
          ev.min_regular = std::min(ev.min_regular, intersection_count(inst.A(j, i), inst.B(jp, ip)));
        }
      }
      ev.min_special_a = std::min(ev.min_special_a, intersection_count(inst.A(j, s), inst.B(3 - j, i)));
      ev.min_special_b = std::min(ev.min_special_b, intersection_count(inst.A(3 - j, i), inst.B(j, s)));
    }
  }
  ev.reg = static_cast<double>(ev.min_regular) < reg_bound;
  ev.special_a = static_cast<double>(ev.min_special_a) < spec_bound;
  ev.special_b = static_cast<double>(ev.min_special_b) < spec_bound;
  return ev;
}

bool exists_z_good_for_both(const InstanceValuations& vals, double eps) {
  const std::size_t m = vals.vA.universe();
  if (m > 24) throw std::invalid_argument("exhaustive search over Z is limited to m <= 24");
  const double threshold = 179.0 * static_cast<double>(m) / 240.0 + eps * static_cast<double>(m);
  ItemSet z(m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    z.mutable_words()[0] = mask;
    const ItemSet zbar = z.complement();
    bool both = true;
    for (std::size_t j = 0; j < 2 && both; ++j) {
      const auto q = vals.aux_a[j].eval(z) + vals.aux_b[j].eval(zbar);
      both = static_cast<double>(q) > threshold;
    }
    if (both) return true;
  }
  return false;
}

std::vector<ItemSet> candidate_allocations(const InstanceValuations& vals) {
  std::vector<ItemSet> out;
  const auto add = [&](const BXOSValuation& a, const BXOSValuation& b) {
    out.push_back(opt_allocation(a, b, opt_clause_pair(a, b)).to_alice);
  };
  add(vals.vA, vals.vB);
  add(vals.aux_a[0], vals.aux_b[0]);
  add(vals.aux_a[1], vals.aux_b[1]);
  return out;
}

}  // namespace xoslab
