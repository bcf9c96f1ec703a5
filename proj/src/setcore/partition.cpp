#include "xoslab/partition.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace xoslab {

namespace {

constexpr std::size_t kMaxParts = 12;

void check_sets(std::size_t universe, std::span<const ItemSet> sets) {
  if (sets.size() > kMaxParts) throw std::invalid_argument("too many sets for a Part refinement");
  for (const auto& s : sets) {
    if (s.universe() != universe) {
      throw std::invalid_argument("Part refinement over sets with mismatched universes (" +
                                  std::to_string(s.universe()) + " vs " +
                                  std::to_string(universe) + ")");
    }
  }
}

ItemSet::Word valid_bits(std::size_t universe, std::size_t word) {
  const std::size_t lo = word * ItemSet::kWordBits;
  if (lo + ItemSet::kWordBits <= universe) return ~ItemSet::Word{0};
  return (ItemSet::Word{1} << (universe - lo)) - 1;
}

// Expands one word of the refinement: out[c] = items of the word lying in cell c.
void refine_word(std::span<const ItemSet> sets, std::size_t w, ItemSet::Word base,
                 std::vector<ItemSet::Word>& out) {
  out.assign(1, base);
  for (const auto& s : sets) {
    const ItemSet::Word sw = s.words()[w];
    const std::size_t half = out.size();
    out.resize(2 * half);
    for (std::size_t j = half; j-- > 0;) {
      const ItemSet::Word cur = out[j];
      out[2 * j] = cur & ~sw;
      out[2 * j + 1] = cur & sw;
    }
  }
}

}  // namespace

std::vector<ItemSet> part_cells(std::size_t universe, std::span<const ItemSet> sets) {
  check_sets(universe, sets);
  const std::size_t cells = std::size_t{1} << sets.size();
  std::vector<ItemSet> out(cells, ItemSet(universe));
  std::vector<ItemSet::Word> scratch;
  const std::size_t words = (universe + ItemSet::kWordBits - 1) / ItemSet::kWordBits;
  for (std::size_t w = 0; w < words; ++w) {
    refine_word(sets, w, valid_bits(universe, w), scratch);
    for (std::size_t c = 0; c < cells; ++c) out[c].mutable_words()[w] = scratch[c];
  }
  return out;
}

std::vector<ItemSet> part_cells(std::span<const ItemSet> sets) {
  if (sets.empty()) throw std::invalid_argument("part_cells: universe unknown for an empty family");
  return part_cells(sets.front().universe(), sets);
}

Profile part_profile(std::size_t universe, std::span<const ItemSet> sets, const ItemSet* mask) {
  check_sets(universe, sets);
  if (mask != nullptr && mask->universe() != universe) {
    throw std::invalid_argument("part_profile: mask over a different universe");
  }
  const std::size_t cells = std::size_t{1} << sets.size();
  Profile out(cells, 0);
  std::vector<ItemSet::Word> scratch;
  const std::size_t words = (universe + ItemSet::kWordBits - 1) / ItemSet::kWordBits;
  for (std::size_t w = 0; w < words; ++w) {
    ItemSet::Word base = valid_bits(universe, w);
    if (mask != nullptr) base &= mask->words()[w];
    if (base == 0) continue;
    refine_word(sets, w, base, scratch);
    for (std::size_t c = 0; c < cells; ++c) out[c] += static_cast<std::size_t>(std::popcount(scratch[c]));
  }
  return out;
}

Profile part_profile(std::span<const ItemSet> sets, const ItemSet* mask) {
  if (mask != nullptr) return part_profile(mask->universe(), sets, mask);
  if (sets.empty()) throw std::invalid_argument("part_profile: universe unknown for an empty family");
  return part_profile(sets.front().universe(), sets, nullptr);
}

PartitionParameter::PartitionParameter(std::vector<ItemSet> cells, std::vector<std::size_t> counts)
    : cells_(std::move(cells)), counts_(std::move(counts)) {
  if (cells_.empty()) throw std::invalid_argument("partition parameter needs at least one cell");
  if (cells_.size() != counts_.size()) {
    throw std::invalid_argument("partition parameter has " + std::to_string(cells_.size()) +
                                " cells but " + std::to_string(counts_.size()) + " counts");
  }
  const std::size_t universe = cells_.front().universe();
  ItemSet covered(universe);
  std::size_t total = 0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].universe() != universe) throw std::invalid_argument("partition cells over mismatched universes");
    const std::size_t size = cells_[i].count();
    if (counts_[i] > size) {
      throw std::invalid_argument("partition parameter count " + std::to_string(counts_[i]) +
                                  " exceeds size " + std::to_string(size) + " of cell " +
                                  std::to_string(i));
    }
    covered |= cells_[i];
    total += size;
  }
  if (total != universe || covered.count() != universe) {
    throw std::invalid_argument("partition cells are not a disjoint cover of the universe");
  }
}

PartitionParameter PartitionParameter::from_sets(std::span<const ItemSet> sets,
                                                 std::vector<std::size_t> counts) {
  return PartitionParameter(part_cells(sets), std::move(counts));
}

std::size_t PartitionParameter::total() const {
  std::size_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

void partial_shuffle(std::vector<std::size_t>& pool, std::size_t count, RngStream& rng) {
  const std::size_t size = pool.size();
  for (std::size_t i = 0; i < count && i + 1 < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(size - i));
    std::swap(pool[i], pool[j]);
  }
}

ItemSet sample_pc(const PartitionParameter& param, RngStream& rng) {
  ItemSet out(param.universe());
  for (std::size_t i = 0; i < param.k(); ++i) {
    const std::size_t want = param.counts()[i];
    if (want == 0) continue;
    auto pool = param.cells()[i].items();
    partial_shuffle(pool, want, rng);
    for (std::size_t j = 0; j < want; ++j) out.set(pool[j]);
  }
  return out;
}

ItemSet sample_pc_ally(const PartitionParameter& param, RngStream& rng) {
  ItemSet out(param.universe());
  for (std::size_t i = 0; i < param.k(); ++i) {
    const std::size_t want = param.counts()[i];
    if (want == 0) continue;
    const std::size_t size = param.cells()[i].count();
    for (auto z : param.cells()[i].items()) {
      // Exact Bernoulli(want/size).
      if (rng.uniform_below(size) < want) out.set(z);
    }
  }
  return out;
}

Rational expected_intersection(const PartitionParameter& d, const PartitionParameter& d2) {
  if (d.universe() != d2.universe()) throw std::invalid_argument("expected_intersection: mismatched universes");
  Rational delta = 0;
  for (std::size_t i = 0; i < d.k(); ++i) {
    const std::size_t si = d.cells()[i].count();
    if (si == 0 || d.counts()[i] == 0) continue;
    for (std::size_t j = 0; j < d2.k(); ++j) {
      const std::size_t sj = d2.cells()[j].count();
      if (sj == 0 || d2.counts()[j] == 0) continue;
      const std::size_t overlap = intersection_count(d.cells()[i], d2.cells()[j]);
      if (overlap == 0) continue;
      using boost::multiprecision::cpp_int;
      delta += Rational(cpp_int(d.counts()[i]) * d2.counts()[j] * overlap, cpp_int(si) * sj);
    }
  }
  return delta;
}

std::vector<ItemSet> refine_sample(std::span<const ItemSet> cells,
                                   const std::vector<std::vector<std::size_t>>& class_counts,
                                   RngStream& rng) {
  if (cells.empty()) throw std::invalid_argument("refine_sample: no cells");
  if (class_counts.size() != cells.size()) {
    throw std::invalid_argument("refine_sample: " + std::to_string(cells.size()) + " cells but " +
                                std::to_string(class_counts.size()) + " count rows");
  }
  const std::size_t classes = class_counts.front().size();
  const std::size_t universe = cells.front().universe();
  std::vector<ItemSet> out(classes, ItemSet(universe));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& row = class_counts[c];
    if (row.size() != classes) throw std::invalid_argument("refine_sample: ragged class counts");
    auto pool = cells[c].items();
    std::size_t row_total = 0;
    for (auto x : row) row_total += x;
    if (row_total != pool.size()) {
      throw std::invalid_argument("refine_sample: class counts of cell " + std::to_string(c) +
                                  " sum to " + std::to_string(row_total) + ", cell has " +
                                  std::to_string(pool.size()) + " items");
    }
    // Shuffling all but the last class's share yields a uniform labelling.
    partial_shuffle(pool, pool.size() - (classes == 0 ? 0 : row.back()), rng);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < classes; ++k) {
      for (std::size_t j = 0; j < row[k]; ++j) out[k].set(pool[pos++]);
    }
  }
  return out;
}

}  // namespace xoslab
