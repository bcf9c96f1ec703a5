#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "reference_sets.hpp"
#include "xoslab/item_set.hpp"
#include "xoslab/partition.hpp"
#include "xoslab/rational.hpp"
#include "xoslab/rng.hpp"
#include "xoslab/stats.hpp"

using namespace xoslab;

namespace {

using Counts = std::vector<std::size_t>;

ItemSet from_mask(std::size_t m, std::uint32_t mask) {
  ItemSet s(m);
  for (std::size_t i = 0; i < m; ++i) {
    if ((mask >> i) & 1u) s.set(i);
  }
  return s;
}

std::uint32_t to_mask(const ItemSet& s) {
  std::uint32_t mask = 0;
  for (auto z : s.items()) mask |= 1u << z;
  return mask;
}

// Brute-force oracle for Part: classify each item by membership pattern.
Counts naive_profile(const std::vector<ItemSet>& sets, std::size_t m) {
  Counts out(std::size_t{1} << sets.size(), 0);
  for (std::size_t z = 0; z < m; ++z) {
    std::size_t idx = 0;
    for (const auto& s : sets) idx = 2 * idx + (s.test(z) ? 1 : 0);
    ++out[idx];
  }
  return out;
}

}  // namespace

// --- RngStream --------------------------------------------------------------

TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu}),
            (A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}),
            (A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, DeterministicPerSeedAndStream) {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
  EXPECT_NE(va, vd);
  EXPECT_EQ(RngStream(1, 2).substream(5)(), RngStream(1, 2).substream(5)());
  EXPECT_NE(RngStream(1, 2).substream(5)(), RngStream(1, 2).substream(6)());
}

TEST(RngStream, UniformBelowIsUniform) {
  RngStream rng(2024, 0);
  std::vector<std::uint64_t> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[rng.uniform_below(7)];
  EXPECT_GT(stats::uniformity(hist).p_value, 1e-3);
  EXPECT_THROW(rng.uniform_below(0), std::invalid_argument);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

// --- Rational ---------------------------------------------------------------

TEST(Rational, FormattingAndParsing) {
  EXPECT_EQ(to_string(make_rational(408, 100)), "102/25");
  EXPECT_EQ(to_string(make_rational(8, 2)), "4");
  EXPECT_EQ(parse_rational("51/200"), make_rational(51, 200));
  EXPECT_EQ(parse_rational("0.002"), make_rational(1, 500));
  EXPECT_EQ(parse_rational("-1.5"), make_rational(-3, 2));
  EXPECT_EQ(parse_rational("7"), make_rational(7));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_NEAR(to_double(make_rational(61, 240)), 61.0 / 240.0, 1e-15);
}

// --- ItemSet ----------------------------------------------------------------

TEST(ItemSet, BasicOperations) {
  ItemSet a(130, {0, 5, 64, 129});
  ItemSet b(130, {5, 64, 100});
  EXPECT_EQ(a.count(), 4u);
  EXPECT_EQ((a & b).items(), (std::vector<std::size_t>{5, 64}));
  EXPECT_EQ((a | b).count(), 5u);
  EXPECT_EQ((a ^ b).items(), (std::vector<std::size_t>{0, 100, 129}));
  EXPECT_EQ((a - b).items(), (std::vector<std::size_t>{0, 129}));
  EXPECT_EQ(a.complement().count(), 126u);
  EXPECT_FALSE(a.complement().test(129));
  EXPECT_EQ(intersection_count(a, b), 2u);
  EXPECT_EQ(union_count(a, b), 5u);
  EXPECT_TRUE((a & b).is_subset_of(a));
  EXPECT_EQ(ItemSet::full(130).count(), 130u);
  EXPECT_TRUE(ItemSet(130).empty());
  EXPECT_THROW(a.set(130), std::out_of_range);
  EXPECT_THROW(a & ItemSet(129), std::invalid_argument);
}

TEST(ItemSet, HexRoundTripAndRejection) {
  ItemSet s(12, {0, 3, 8, 11});
  EXPECT_EQ(s.to_hex(), "0909");
  EXPECT_EQ(ItemSet::from_hex(12, "0909"), s);
  RngStream rng(9, 9);
  for (std::size_t m : {1u, 7u, 8u, 63u, 64u, 65u, 200u}) {
    ItemSet r(m);
    for (std::size_t z = 0; z < m; ++z) {
      if (rng.uniform_below(2)) r.set(z);
    }
    EXPECT_EQ(ItemSet::from_hex(m, r.to_hex()), r);
  }
  EXPECT_THROW(ItemSet::from_hex(12, "090"), std::invalid_argument);
  EXPECT_THROW(ItemSet::from_hex(12, "09g9"), std::invalid_argument);
  EXPECT_THROW(ItemSet::from_hex(12, "0919"), std::invalid_argument);  // bit 12 set
}

// --- Part -------------------------------------------------------------------

TEST(Part, EmptyFamilyIsWholeUniverse) {
  const auto cells = part_cells(16, std::vector<ItemSet>{});
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0], ItemSet::full(16));
  EXPECT_THROW(part_cells(std::vector<ItemSet>{}), std::invalid_argument);
}

TEST(Part, SingleSetSplitsComplementFirst) {
  const ItemSet s(16, {0, 1, 2, 3, 4, 5, 6, 7});
  const auto cells = part_cells(std::vector<ItemSet>{s});
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0], s.complement());
  EXPECT_EQ(cells[1], s);
}

TEST(Part, ReferencePairIsCompatible) {
  const auto st = reftest::ST();
  EXPECT_EQ(part_profile(st), (Counts{4, 1, 0, 0, 0, 1, 2, 0, 1, 0, 1, 1, 0, 1, 0, 4}));
  EXPECT_EQ(part_profile(st), naive_profile(st, 16));
  const auto cells = part_cells(st);
  ItemSet cover(16);
  for (const auto& c : cells) {
    EXPECT_TRUE((cover & c).empty());
    cover |= c;
  }
  EXPECT_EQ(cover, ItemSet::full(16));
}

TEST(Part, ReferenceClauseProfiles) {
  const auto st = reftest::ST();
  const auto a1 = reftest::A1();
  const auto a2 = reftest::A2();
  EXPECT_EQ(part_profile(st, a1), (Counts{2, 0, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 2}));
  EXPECT_EQ(part_profile(st, a2), (Counts{2, 0, 0, 0, 0, 0, 2, 0, 1, 0, 0, 0, 0, 1, 0, 2}));
  EXPECT_EQ(part_profile(reftest::S(), a1), (Counts{2, 1, 2, 3}));
  EXPECT_EQ(part_profile(st, ItemSet(16)), Counts(16, 0));
}

TEST(Part, MatchesNaiveOracleOnRandomFamilies) {
  RngStream rng(77, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.uniform_below(200);
    const std::size_t k = rng.uniform_below(6);
    std::vector<ItemSet> sets;
    for (std::size_t i = 0; i < k; ++i) {
      ItemSet s(m);
      for (std::size_t z = 0; z < m; ++z) {
        if (rng.uniform_below(2)) s.set(z);
      }
      sets.push_back(s);
    }
    const auto prof = part_profile(m, sets);
    ASSERT_EQ(prof, naive_profile(sets, m));
    const auto cells = part_cells(m, sets);
    for (std::size_t c = 0; c < cells.size(); ++c) ASSERT_EQ(cells[c].count(), prof[c]);
  }
  EXPECT_THROW(part_profile(std::vector<ItemSet>{ItemSet(8), ItemSet(9)}), std::invalid_argument);
}

// --- PartitionParameter -----------------------------------------------------

TEST(PartitionParameter, Validation) {
  const ItemSet lo(8, {0, 1, 2, 3});
  EXPECT_NO_THROW(PartitionParameter({lo, lo.complement()}, {2, 4}));
  EXPECT_THROW(PartitionParameter({lo, lo.complement()}, {5, 0}), std::invalid_argument);
  EXPECT_THROW(PartitionParameter({lo, lo}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(PartitionParameter({lo}, {1}), std::invalid_argument);
  EXPECT_THROW(PartitionParameter({lo, lo.complement()}, {1}), std::invalid_argument);
}

TEST(SamplePc, TrivialCounts) {
  const ItemSet lo(16, {0, 1, 2, 3, 4});
  const PartitionParameter all({lo, lo.complement()}, {5, 11});
  const PartitionParameter none({lo, lo.complement()}, {0, 0});
  RngStream rng(1, 1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_pc(all, rng), ItemSet::full(16));
    EXPECT_TRUE(sample_pc(none, rng).empty());
    EXPECT_EQ(sample_pc_ally(all, rng), ItemSet::full(16));
    EXPECT_TRUE(sample_pc_ally(none, rng).empty());
  }
}

TEST(SamplePc, ItemFrequencyHalf) {
  const PartitionParameter p({ItemSet::full(16)}, {8});
  RngStream rng(3, 0);
  const int draws = 100000;
  std::vector<std::uint64_t> hits(16, 0);
  for (int i = 0; i < draws; ++i) {
    const auto u = sample_pc(p, rng);
    ASSERT_EQ(u.count(), 8u);
    for (auto z : u.items()) ++hits[z];
  }
  for (auto h : hits) EXPECT_NEAR(static_cast<double>(h) / draws, 0.5, 0.01);
  EXPECT_GT(stats::uniformity(hits).p_value, 1e-3);
}

TEST(SamplePc, ProfileMatchesCountsEveryDraw) {
  RngStream rng(11, 0);
  const auto st = reftest::ST();
  const auto cells = part_cells(st);
  const Counts counts{2, 0, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 2};
  const PartitionParameter p(cells, counts);
  for (int i = 0; i < 10000; ++i) ASSERT_EQ(part_profile(st, sample_pc(p, rng)), counts);
}

// Exhaustive uniformity: enumerate the feasible family, compare frequencies.
TEST(SamplePc, ExhaustiveUniformitySmallUniverse) {
  const std::size_t m = 8;
  const ItemSet c0(m, {0, 3, 5});
  const ItemSet c1(m, {1, 2, 6, 7});
  const ItemSet c2(m, {4});
  const PartitionParameter p({c0, c1, c2}, {1, 2, 1});
  std::map<std::uint32_t, std::size_t> index;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const ItemSet u = from_mask(m, mask);
    if (intersection_count(u, c0) == 1 && intersection_count(u, c1) == 2 &&
        intersection_count(u, c2) == 1) {
      index.emplace(mask, index.size());
    }
  }
  ASSERT_EQ(index.size(), 3u * 6u * 1u);
  RngStream rng(5, 5);
  std::vector<std::uint64_t> hist(index.size(), 0);
  for (int i = 0; i < 1000000; ++i) {
    const auto it = index.find(to_mask(sample_pc(p, rng)));
    ASSERT_NE(it, index.end());
    ++hist[it->second];
  }
  EXPECT_GT(stats::uniformity(hist).p_value, 1e-3);
}

TEST(SamplePcAlly, MeanSize) {
  const PartitionParameter p({ItemSet::full(16)}, {8});
  RngStream rng(4, 0);
  double total = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) total += static_cast<double>(sample_pc_ally(p, rng).count());
  EXPECT_NEAR(total / draws, 8.0, 0.05);
}

TEST(SamplePcAlly, PerItemProbability) {
  const ItemSet lo(6, {0, 1, 2});
  const PartitionParameter p({lo, lo.complement()}, {1, 2});
  RngStream rng(4, 1);
  std::vector<double> freq(6, 0.0);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    for (auto z : sample_pc_ally(p, rng).items()) freq[z] += 1.0 / draws;
  }
  for (std::size_t z = 0; z < 3; ++z) EXPECT_NEAR(freq[z], 1.0 / 3.0, 0.01);
  for (std::size_t z = 3; z < 6; ++z) EXPECT_NEAR(freq[z], 2.0 / 3.0, 0.01);
}

// Pr_PC(U ∩ S = ∅) by enumeration versus the PC-ally closed form
// Π (1 − p_i/|P_i|)^{|S ∩ P_i|}, over every labelled partition of [m] into
// at most three cells, every count vector and every S.
TEST(SamplePcAlly, DominationExhaustive) {
  const std::size_t m = 6;
  std::size_t checked = 0;
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<std::size_t> label(m, 0);
  const std::size_t combos = 729;  // 3^6 labellings
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t c = code;
    std::vector<std::uint32_t> masks(3, 0);
    for (std::size_t z = 0; z < m; ++z) {
      masks[c % 3] |= 1u << z;
      c /= 3;
    }
    std::vector<std::uint32_t> nonempty;
    for (auto mk : masks) {
      if (mk != 0) nonempty.push_back(mk);
    }
    std::sort(nonempty.begin(), nonempty.end());
    if (!seen.insert(nonempty).second) continue;
    std::vector<ItemSet> cells;
    for (auto mk : nonempty) cells.push_back(from_mask(m, mk));
    // Every count vector.
    std::vector<std::size_t> counts(cells.size(), 0);
    while (true) {
      const PartitionParameter p(cells, counts);
      // Feasible family.
      std::vector<std::uint32_t> family;
      for (std::uint32_t u = 0; u < (1u << m); ++u) {
        bool ok = true;
        for (std::size_t i = 0; i < cells.size() && ok; ++i) {
          ok = static_cast<std::size_t>(std::popcount(u & nonempty[i])) == counts[i];
        }
        if (ok) family.push_back(u);
      }
      for (std::uint32_t s = 0; s < (1u << m); ++s) {
        std::size_t disjoint = 0;
        for (auto u : family) disjoint += (u & s) == 0 ? 1 : 0;
        const Rational pc = make_rational(static_cast<std::int64_t>(disjoint),
                                          static_cast<std::int64_t>(family.size()));
        Rational ally = 1;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          const auto size = static_cast<std::int64_t>(cells[i].count());
          const Rational q = 1 - make_rational(static_cast<std::int64_t>(counts[i]), size);
          for (int e = 0; e < std::popcount(s & nonempty[i]); ++e) ally *= q;
        }
        ASSERT_LE(pc, ally) << "partition " << code << " S=" << s;
        ++checked;
      }
      // Next count vector.
      std::size_t i = 0;
      while (i < counts.size() && counts[i] == cells[i].count()) counts[i++] = 0;
      if (i == counts.size()) break;
      ++counts[i];
    }
  }
  EXPECT_GT(checked, 10000u);
}

// --- expected_intersection --------------------------------------------------

TEST(ExpectedIntersection, SimpleCases) {
  const PartitionParameter half({ItemSet::full(16)}, {8});
  EXPECT_EQ(expected_intersection(half, half), make_rational(4));
  const ItemSet lo(16, {0, 1, 2, 3, 4, 5});
  const PartitionParameter full({lo, lo.complement()}, {6, 10});
  const PartitionParameter other({lo, lo.complement()}, {3, 2});
  EXPECT_EQ(expected_intersection(full, other), make_rational(5));
  EXPECT_THROW(expected_intersection(half, PartitionParameter({ItemSet::full(8)}, {1})),
               std::invalid_argument);
}

TEST(ExpectedIntersection, ReferenceRegularCross) {
  const auto ps = PartitionParameter::from_sets(reftest::S(), {2, 1, 2, 3});
  const auto pt = PartitionParameter::from_sets(reftest::T(), {2, 1, 2, 3});
  EXPECT_EQ(expected_intersection(ps, pt), make_rational(51 * 16, 200));
}

// Oracle: E|U ∩ U'| = Σ_z Pr[z ∈ U] Pr[z ∈ U'] for independent U, U'.
TEST(ExpectedIntersection, AgreesWithPerItemMarginals) {
  RngStream rng(8, 8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 10 + rng.uniform_below(40);
    auto random_param = [&] {
      std::vector<ItemSet> sets;
      for (int i = 0; i < 2; ++i) {
        ItemSet s(m);
        for (std::size_t z = 0; z < m; ++z) {
          if (rng.uniform_below(2)) s.set(z);
        }
        sets.push_back(s);
      }
      const auto prof = part_profile(sets);
      Counts counts;
      for (auto c : prof) counts.push_back(rng.uniform_below(c + 1));
      return PartitionParameter::from_sets(sets, counts);
    };
    const auto d = random_param();
    const auto d2 = random_param();
    auto marginal = [m](const PartitionParameter& p) {
      std::vector<Rational> pr(m, 0);
      for (std::size_t i = 0; i < p.k(); ++i) {
        const auto size = static_cast<std::int64_t>(p.cells()[i].count());
        for (auto z : p.cells()[i].items()) {
          pr[z] = make_rational(static_cast<std::int64_t>(p.counts()[i]), size);
        }
      }
      return pr;
    };
    const auto pa = marginal(d);
    const auto pb = marginal(d2);
    Rational oracle = 0;
    for (std::size_t z = 0; z < m; ++z) oracle += pa[z] * pb[z];
    ASSERT_EQ(expected_intersection(d, d2), oracle);
  }
}

// --- refine_sample ----------------------------------------------------------

TEST(RefineSample, SingleClassTakesCell) {
  RngStream rng(2, 2);
  const ItemSet cell = ItemSet::full(9);
  const auto out = refine_sample(std::vector<ItemSet>{cell}, {{9, 0}}, rng);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], cell);
  EXPECT_TRUE(out[1].empty());
}

TEST(RefineSample, ExchangeableWithinCell) {
  RngStream rng(6, 0);
  const ItemSet cell = ItemSet::full(5);
  const int draws = 100000;
  std::vector<double> freq(5, 0.0);
  for (int i = 0; i < draws; ++i) {
    const auto out = refine_sample(std::vector<ItemSet>{cell}, {{2, 2, 1}}, rng);
    ASSERT_EQ(out[0].count(), 2u);
    ASSERT_EQ(out[1].count(), 2u);
    ASSERT_EQ(out[2].count(), 1u);
    for (auto z : out[0].items()) freq[z] += 1.0 / draws;
  }
  for (double f : freq) EXPECT_NEAR(f, 0.4, 0.01);
}

TEST(RefineSample, ProfileRoundTrip) {
  RngStream rng(12, 0);
  const auto s = reftest::S();
  const auto cells = part_cells(s);
  // Per S-cell (t1,t2) class counts that reproduce the compatible profile.
  const std::vector<Counts> rows{{4, 1, 0, 0}, {0, 1, 2, 0}, {1, 0, 1, 1}, {0, 1, 0, 4}};
  for (int i = 0; i < 2000; ++i) {
    const auto classes = refine_sample(cells, rows, rng);
    ItemSet t1 = classes[2] | classes[3];
    ItemSet t2 = classes[1] | classes[3];
    ASSERT_EQ(part_profile(std::vector<ItemSet>{s[0], s[1], t1, t2}),
              (Counts{4, 1, 0, 0, 0, 1, 2, 0, 1, 0, 1, 1, 0, 1, 0, 4}));
  }
}

TEST(RefineSample, RejectsBadCounts) {
  RngStream rng(1, 0);
  EXPECT_THROW(refine_sample(std::vector<ItemSet>{ItemSet::full(4)}, {{2, 1}}, rng),
               std::invalid_argument);
  EXPECT_THROW(refine_sample(std::vector<ItemSet>{ItemSet::full(4)}, {}, rng), std::invalid_argument);
}

// --- stats ------------------------------------------------------------------

TEST(Stats, ChiSquareTail) {
  EXPECT_NEAR(stats::chi_square_sf(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_NEAR(stats::chi_square_sf(18.307038053275146, 10), 0.05, 1e-9);
  EXPECT_EQ(stats::chi_square_sf(0.0, 3), 1.0);
}

TEST(Stats, IdenticalSamplesGiveZero) {
  const std::vector<std::uint64_t> h{10, 40, 80, 40, 10, 1};
  const auto r = stats::two_sample(h, h);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(Stats, DetectsShift) {
  const std::vector<std::uint64_t> a{100, 200, 300, 200, 100, 0};
  const std::vector<std::uint64_t> b{0, 100, 200, 300, 200, 100};
  EXPECT_LT(stats::two_sample(a, b).p_value, 1e-6);
}

TEST(Stats, Summary) {
  const auto s = stats::summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 4.0);
}
