#include <gtest/gtest.h>

#include <cmath>

#include "xoslab/infotheory.hpp"

using namespace xoslab;
using namespace xoslab::info;

namespace {

JointDistribution coin(Real p1) { return JointDistribution({"X"}, {{{0}, 1 - p1}, {{1}, p1}}); }

// Largest |p(x,y,z)p(z) − p(x,z)p(y,z)| over the support: zero exactly when
// X and Y are independent given Z.
Real dependence_gap(const JointDistribution& d) {
  const auto xyz = d.marginal({"X", "Y", "Z"}).support();
  const auto xz = d.marginal({"X", "Z"}).support();
  const auto yz = d.marginal({"Y", "Z"}).support();
  const auto z = d.marginal({"Z"}).support();
  Real gap = 0;
  for (const auto& [xk, px] : xz) {
    for (const auto& [yk, py] : yz) {
      if (xk[1] != yk[1]) continue;
      const auto it = xyz.find({xk[0], yk[0], xk[1]});
      const Real pxyz = it == xyz.end() ? 0 : it->second;
      gap = std::max(gap, std::fabs(pxyz * z.at({xk[1]}) - px * py));
    }
  }
  return gap;
}

}  // namespace

TEST(Entropy, ClosedForms) {
  EXPECT_NEAR(entropy(coin(0), {"X"}), 0, 1e-15);
  EXPECT_NEAR(entropy(coin(0.25L), {"X"}), 0.8112781244591328L, 1e-9);
  const auto u4 = JointDistribution({"X"}, {{{0}, 0.25L}, {{1}, 0.25L}, {{2}, 0.25L}, {{3}, 0.25L}});
  EXPECT_NEAR(entropy(u4, {"X"}), 2, 1e-15);
  EXPECT_THROW(entropy(u4, {"Q"}), std::invalid_argument);
}

TEST(JointDistribution, Validation) {
  EXPECT_THROW(JointDistribution({"X"}, {{{0}, 0.5L}}), std::invalid_argument);
  EXPECT_THROW(JointDistribution({"X"}, {{{0}, 1.5L}, {{1}, -0.5L}}), std::invalid_argument);
  EXPECT_THROW(JointDistribution({"X"}, {{{0, 1}, 1}}), std::invalid_argument);
  EXPECT_THROW(JointDistribution({"X", "X"}, {{{0, 1}, 1}}), std::invalid_argument);
  const auto d = JointDistribution::from_rationals({"X", "Y"}, {{{0, 0}, make_rational(1, 3)}, {{1, 1}, make_rational(2, 3)}});
  EXPECT_NEAR(d.marginal({"Y"}).support().at({1}), 2.0L / 3, 1e-18);
  EXPECT_NEAR(d.condition({{"X", 1}}).support().at({1, 1}), 1, 1e-18);
  EXPECT_THROW(d.condition({{"X", 5}}), std::domain_error);
  EXPECT_THROW(JointDistribution::from_rationals({"X"}, {{{0}, make_rational(1, 3)}}), std::invalid_argument);
}

TEST(MutualInfo, ClosedForms) {
  const auto ind = product(coin(0.3L), JointDistribution({"Y"}, {{{0}, 0.6L}, {{1}, 0.4L}}));
  EXPECT_NEAR(mutual_info(ind, {"X"}, {"Y"}), 0, 1e-15);
  for (int k : {2, 3, 5}) {
    std::vector<std::pair<Outcome, Real>> s;
    for (int i = 0; i < k; ++i) s.push_back({{i, i}, Real(1) / k});
    const JointDistribution same({"X", "Y"}, s);
    EXPECT_NEAR(mutual_info(same, {"X"}, {"Y"}), std::log2(static_cast<Real>(k)), 1e-15);
  }
  EXPECT_THROW(mutual_info(ind, {"X"}, {"X"}), std::invalid_argument);
  EXPECT_THROW(mutual_info(ind, {"X"}, {"Y"}, {"Y"}), std::invalid_argument);
}

TEST(MutualInfo, EntropyAndKlFormsAgree) {
  RngStream rng(1, 0);
  for (int t = 0; t < 100; ++t) {
    const auto d = random_joint({"X", "Y", "Z"}, {2 + t % 3, 3, 2 + t % 2}, rng);
    const Real a = mutual_info(d, {"X"}, {"Y"}, {"Z"});
    EXPECT_NEAR(a, mutual_info_kl(d, {"X"}, {"Y"}, {"Z"}), 1e-12);
    EXPECT_NEAR(a, mutual_info(d, {"Y"}, {"X"}, {"Z"}), 1e-12);
  }
}

TEST(MutualInfo, ZeroExactlyUnderConditionalIndependence) {
  RngStream rng(2, 0);
  int dependent = 0;
  for (int t = 0; t < 200; ++t) {
    const auto d = random_joint({"X", "Y", "Z"}, {2, 3, 2}, rng);
    const Real i = mutual_info(d, {"X"}, {"Y"}, {"Z"});
    const Real gap = dependence_gap(d);
    if (gap > 1e-9) {
      ++dependent;
      EXPECT_GT(i, 0);
    }
    // Build the conditionally independent law p(z)p(x|z)p(y|z) and check I = 0.
    std::vector<std::pair<Outcome, Real>> s;
    const auto xz = d.marginal({"X", "Z"}).support();
    const auto yz = d.marginal({"Y", "Z"}).support();
    const auto z = d.marginal({"Z"}).support();
    for (const auto& [xk, px] : xz) {
      for (const auto& [yk, py] : yz) {
        if (xk[1] == yk[1] && z.at({xk[1]}) > 0) s.push_back({{xk[0], yk[0], xk[1]}, px * py / z.at({xk[1]})});
      }
    }
    const JointDistribution ci({"X", "Y", "Z"}, s);
    EXPECT_NEAR(mutual_info(ci, {"X"}, {"Y"}, {"Z"}), 0, 1e-12);
    EXPECT_LT(dependence_gap(ci), 1e-15);
  }
  EXPECT_GT(dependent, 150);
}

TEST(Divergences, ClosedForms) {
  const auto p = coin(0.5L);
  const auto q = coin(0.75L);
  const auto d = divergences(p, q);
  EXPECT_FALSE(d.kl_infinite);
  EXPECT_NEAR(d.tvd, 0.25L, 1e-18);
  EXPECT_NEAR(d.kl, 0.5L * std::log2(2.0L) + 0.5L * std::log2(2.0L / 3), 1e-15);
  EXPECT_NEAR(d.kl, 0.2075187496394219L, 1e-9);
  EXPECT_LE(d.tvd, std::sqrt(d.kl / 2));
  EXPECT_NEAR(std::sqrt(d.kl / 2), 0.32211, 1e-4);

  const auto same = divergences(p, p);
  EXPECT_EQ(same.kl, 0);
  EXPECT_EQ(same.tvd, 0);
  EXPECT_TRUE(divergences(p, coin(1)).kl_infinite);
  EXPECT_FALSE(divergences(coin(1), p).kl_infinite);
  EXPECT_THROW(divergences(p, JointDistribution({"Y"}, {{{0}, 1}})), std::invalid_argument);
}

TEST(Divergences, TvdFormsAgree) {
  RngStream rng(3, 0);
  for (int t = 0; t < 200; ++t) {
    const int r = 1 + t % 12;
    const auto p = random_joint({"V"}, {r}, rng);
    const auto q = random_joint({"V"}, {r}, rng);
    EXPECT_NEAR(divergences(p, q).tvd, tvd_by_events(p, q), 1e-15);
  }
}

TEST(VerifyIdentities, AllHold) {
  RngStream rng(4, 0);
  const auto rep = verify_identities(200, rng);
  EXPECT_TRUE(rep.ok());
  for (const auto& c : rep.checks) {
    EXPECT_EQ(c.failures, 0u) << c.name << " worst " << static_cast<double>(c.worst);
    EXPECT_GT(c.cases, 0u) << c.name;
  }
  EXPECT_GE(rep.checks.size(), 15u);
}

// The index-information inequality is tight for f = X: both sides equal H(X_1).
TEST(VerifyIdentities, IndexInformationTightCase) {
  JointDistribution d = product(JointDistribution({"X1"}, {{{0}, 0.3L}, {{1}, 0.7L}}),
                                JointDistribution({"X2"}, {{{0}, 0.3L}, {{1}, 0.7L}}));
  d = product(d, JointDistribution({"Y"}, {{{0}, 1}}));
  d = product(d, JointDistribution({"I"}, {{{0}, 0.5L}, {{1}, 0.5L}}));
  d = d.with_function("XI", {"X1", "X2", "I"}, [](const Outcome& o) { return o[static_cast<std::size_t>(o[2])]; });
  d = d.with_function("F", {"X1", "X2"}, [](const Outcome& o) { return o[0] + 2 * o[1]; });
  const Real lhs = mutual_info(d, {"XI"}, {"F"}, {"Y", "I"});
  const Real rhs = mutual_info(d, {"X1", "X2"}, {"F"}, {"Y"}) / 2;
  EXPECT_NEAR(lhs, rhs, 1e-15);
  EXPECT_NEAR(lhs, entropy(d, {"X1"}), 1e-15);
}
