#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "xoslab/item_set.hpp"
#include "xoslab/rational.hpp"
#include "xoslab/rng.hpp"

namespace xoslab {

using Profile = std::vector<std::size_t>;

/// Index of the membership pattern b in lexicographic order: b_1 is the most
/// significant bit, so the all-zeros pattern is cell 0.
inline std::size_t cell_index(std::span<const bool> pattern) {
  std::size_t idx = 0;
  for (bool b : pattern) idx = (idx << 1) | static_cast<std::size_t>(b);
  return idx;
}

/// The 2^k cells of the refinement of the universe by `sets`. Cell idx holds
/// the items z with [z in sets[i]] equal to bit (k-1-i) of idx.
std::vector<ItemSet> part_cells(std::size_t universe, std::span<const ItemSet> sets);
/// As above, taking the universe from the sets; `sets` must be non-empty.
std::vector<ItemSet> part_cells(std::span<const ItemSet> sets);

/// Cell sizes of part_cells, or |cell ∩ mask| when a mask is given. Runs in
/// O(2^k · k · m / 64) without materializing cells.
Profile part_profile(std::size_t universe, std::span<const ItemSet> sets,
                     const ItemSet* mask = nullptr);
Profile part_profile(std::span<const ItemSet> sets, const ItemSet* mask = nullptr);
inline Profile part_profile(std::span<const ItemSet> sets, const ItemSet& mask) {
  return part_profile(mask.universe(), sets, &mask);
}

/// A partition of the universe into k cells together with a target count per
/// cell. Validated on construction.
class PartitionParameter {
 public:
  PartitionParameter(std::vector<ItemSet> cells, std::vector<std::size_t> counts);

  /// Cells of Part(sets) with the given per-cell counts.
  static PartitionParameter from_sets(std::span<const ItemSet> sets, std::vector<std::size_t> counts);

  std::size_t k() const { return cells_.size(); }
  std::size_t universe() const { return cells_.front().universe(); }
  const std::vector<ItemSet>& cells() const { return cells_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t total() const;

 private:
  std::vector<ItemSet> cells_;
  std::vector<std::size_t> counts_;
};

/// Uniform over all U with |U ∩ cell_i| = counts_i. The constraint factors
/// over cells, so each cell contributes an independent uniform subset.
ItemSet sample_pc(const PartitionParameter& param, RngStream& rng);

/// Each item z joins U independently with probability counts_i / |cell_i|.
ItemSet sample_pc_ally(const PartitionParameter& param, RngStream& rng);

/// Exact E|U ∩ U'| for independent U ~ PC(d), U' ~ PC(d2):
/// Σ p_i p'_j |P_i ∩ P'_j| / (|P_i| |P'_j|), empty cells skipped.
Rational expected_intersection(const PartitionParameter& d, const PartitionParameter& d2);

/// Splits every cell uniformly at random into labelled classes.
/// class_counts[cell][c] is the number of items of that cell sent to class c;
/// each row must sum to the cell size. Returns one set per class; the classes
/// partition the universe.
std::vector<ItemSet> refine_sample(std::span<const ItemSet> cells,
                                   const std::vector<std::vector<std::size_t>>& class_counts,
                                   RngStream& rng);

/// Draws a uniform `count`-subset of `pool` into the front of `pool` by a
/// partial Fisher-Yates shuffle.
void partial_shuffle(std::vector<std::size_t>& pool, std::size_t count, RngStream& rng);

}  // namespace xoslab
