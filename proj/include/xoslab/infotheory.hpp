#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "xoslab/rational.hpp"
#include "xoslab/rng.hpp"

namespace xoslab::info {

using Real = long double;
using Outcome = std::vector<int>;
using VarList = std::vector<std::string>;

/// A finitely supported joint law of named discrete variables. Outcomes with
/// probability zero may be stored; they never contribute to any measure.
class JointDistribution {
 public:
  /// Duplicate outcomes are merged. Throws std::invalid_argument on a
  /// negative probability, an outcome of the wrong arity, duplicate names, or
  /// a total further than 1e-12 from 1.
  JointDistribution(VarList names, const std::vector<std::pair<Outcome, Real>>& support);
  static JointDistribution from_rationals(VarList names, const std::vector<std::pair<Outcome, Rational>>& support);

  const VarList& names() const { return names_; }
  const std::map<Outcome, Real>& support() const { return p_; }
  std::size_t index_of(const std::string& var) const;

  /// Law of the listed variables, in the listed order.
  JointDistribution marginal(const VarList& vars) const;
  /// Law given var = value for each listed pair. Throws std::domain_error if
  /// the event has probability zero.
  JointDistribution condition(const std::vector<std::pair<std::string, int>>& given) const;
  /// Adds a variable computed from existing ones.
  JointDistribution with_function(const std::string& name, const VarList& inputs,
                                  const std::function<int(const Outcome&)>& f) const;

 private:
  JointDistribution() = default;
  std::vector<std::size_t> indices(const VarList& vars) const;

  VarList names_;
  std::map<Outcome, Real> p_;
};

/// Product law of independent components.
JointDistribution product(const JointDistribution& a, const JointDistribution& b);

// All measures are in bits and follow 0 log(1/0) = 0.
Real entropy(const JointDistribution& d, const VarList& vars);
/// H(X | Z) as the average over z of H(X | Z = z).
Real conditional_entropy(const JointDistribution& d, const VarList& x, const VarList& given);
/// I(X; Y | Z) = H(X | Z) − H(X | YZ). Throws std::invalid_argument when the
/// groups overlap.
Real mutual_info(const JointDistribution& d, const VarList& x, const VarList& y, const VarList& given = {});
/// The same quantity as E_{(y,z)} KL(dist(X | y, z) ‖ dist(X | z)).
Real mutual_info_kl(const JointDistribution& d, const VarList& x, const VarList& y, const VarList& given = {});

struct Divergence {
  Real kl = 0;  // bits; meaningless when kl_infinite
  bool kl_infinite = false;
  Real tvd = 0;
};
/// KL(p ‖ q) and TVD(p, q) over the union of both supports. p and q must name
/// the same variables in the same order.
Divergence divergences(const JointDistribution& p, const JointDistribution& q);
/// TVD as max over events Ω' of p(Ω') − q(Ω'). Supports of at most 20 outcomes.
Real tvd_by_events(const JointDistribution& p, const JointDistribution& q);

/// Random joint over variables with the given arities. Each cell gets an
/// independent uniform weight, a fraction of cells is zeroed, then the
/// weights are normalized.
JointDistribution random_joint(const VarList& names, const std::vector<int>& arities, RngStream& rng);

struct IdentityCheck {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  /// Largest violation seen: |lhs − rhs| for identities, lhs − rhs for
  /// inequalities (negative when every case holds with slack).
  Real worst = 0;
};

struct IdentityReport {
  Real tolerance = 1e-9L;
  std::vector<IdentityCheck> checks;
  bool ok() const;
};

/// Random 4-variable joints for the standard entropy and divergence identities,
/// plus the index-information bound on exhaustive n = 2 and random n = 3 constructions.
IdentityReport verify_identities(std::size_t trials, RngStream& rng);

}  // namespace xoslab::info
