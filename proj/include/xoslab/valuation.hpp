#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xoslab/construction.hpp"
#include "xoslab/item_set.hpp"

namespace xoslab {

/// Binary-XOS valuation v(Z) = max over clauses C of |Z ∩ C|.
/// Clauses are stored back to back so a scan touches one allocation.
class BXOSValuation {
 public:
  /// `clauses` must be non-empty and share one universe.
  explicit BXOSValuation(const std::vector<ItemSet>& clauses);

  std::size_t universe() const { return universe_; }
  std::size_t size() const { return count_; }
  ItemSet clause(std::size_t i) const;
  std::vector<ItemSet> clauses() const;

  std::size_t eval(const ItemSet& z) const;
  /// Index of the first clause attaining eval(z).
  std::size_t best_clause(const ItemSet& z) const;

  friend bool operator==(const BXOSValuation&, const BXOSValuation&) = default;

 private:
  std::span<const ItemSet::Word> row(std::size_t i) const {
    return {storage_.data() + i * stride_, stride_};
  }
  void require_universe(const ItemSet& z) const;

  std::size_t universe_ = 0;
  std::size_t count_ = 0;
  std::size_t stride_ = 0;
  std::vector<ItemSet::Word> storage_;
};

struct Allocation {
  ItemSet to_alice;
  ItemSet to_bob;
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Throws std::logic_error if the two bundles overlap or differ in universe.
void require_disjoint(const Allocation& a);

/// v^A(O^A) + v^B(O^B).
std::size_t welfare(const BXOSValuation& vA, const BXOSValuation& vB, const Allocation& a);

struct OptResult {
  std::size_t clause_a = 0;
  std::size_t clause_b = 0;
  std::size_t value = 0;
};

/// opt(vA, vB) = max over clause pairs of |F_A ∪ F_B|. Ties go to the
/// lexicographically smallest (clause_a, clause_b).
OptResult opt_clause_pair(const BXOSValuation& vA, const BXOSValuation& vB);

/// The allocation realizing an OptResult: Alice receives F_A (shared items
/// included) and Bob the rest.
Allocation opt_allocation(const BXOSValuation& vA, const BXOSValuation& vB, const OptResult& r);

/// Exhaustive max over Z of vA(Z) + vB(M∖Z). Requires m ≤ 24.
std::size_t opt_bruteforce(const BXOSValuation& vA, const BXOSValuation& vB);

/// The bidders' valuations of an instance and the auxiliary v_1, v_2:
/// F^A = {A^{rA_i}_i}, F^A_j = all 2n clauses except A^{3-j}_{i⋆}; likewise
/// for Bob. aux_a[j-1] holds v^A_j.
struct InstanceValuations {
  BXOSValuation vA;
  BXOSValuation vB;
  std::array<BXOSValuation, 2> aux_a;
  std::array<BXOSValuation, 2> aux_b;
};
InstanceValuations build_valuations(const Instance& inst);

enum class ThetaRecovery { One, Two, None, Ambiguous };
std::string to_string(ThetaRecovery r);

struct ThetaEvidence {
  ThetaRecovery result = ThetaRecovery::None;
  /// q_j = v^A_j(Z) + v^B_j(M∖Z).
  std::array<std::size_t, 2> q{};
  /// 179m/240 + eps·m; q_j must exceed it strictly.
  double threshold = 0.0;
};

ThetaEvidence recover_theta(const InstanceValuations& vals, const ItemSet& z, double eps);
ThetaEvidence recover_theta(const Instance& inst, const ItemSet& z, double eps);

/// The concentration events whose absence makes θ recoverable from every
/// allocation above the threshold.
struct ConcentrationEvents {
  bool reg = false;        // some |A^j_i ∩ B^j'_i'| < 51m/200 − εm, i, i' ≠ i⋆
  bool special_a = false;  // some |A^j_{i⋆} ∩ B^{3−j}_i| < 61m/240 − εm, i ≠ i⋆
  bool special_b = false;  // some |A^{3−j}_i ∩ B^j_{i⋆}| < 61m/240 − εm, i ≠ i⋆
  /// Smallest intersections seen in each family (m when the family is empty).
  std::size_t min_regular = 0;
  std::size_t min_special_a = 0;
  std::size_t min_special_b = 0;
  bool any() const { return reg || special_a || special_b; }
};
ConcentrationEvents detect_events(const Instance& inst, double eps);

/// Exhaustive search for a Z with q_1 and q_2 both above the threshold.
/// Requires m ≤ 24.
bool exists_z_good_for_both(const InstanceValuations& vals, double eps);

/// Allocations a welfare-maximizing algorithm could output: the optimum of
/// (vA, vB) and the optima of (v^A_j, v^B_j) for both j, each as Alice's set.
std::vector<ItemSet> candidate_allocations(const InstanceValuations& vals);

}  // namespace xoslab
