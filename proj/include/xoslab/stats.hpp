#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace xoslab::stats {

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  /// Bins (or columns) left after pooling sparse ones.
  std::size_t bins = 0;
};

/// Upper tail of the chi-square distribution; 1 when dof == 0.
double chi_square_sf(double statistic, std::size_t dof);

/// Goodness of fit of observed counts against the given probabilities.
/// Adjacent bins are pooled until every expected count is at least
/// `min_expected`.
ChiSquareResult goodness_of_fit(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& probabilities,
                                double min_expected = 5.0);

/// Goodness of fit against the uniform distribution on observed.size() bins.
ChiSquareResult uniformity(const std::vector<std::uint64_t>& observed, double min_expected = 5.0);

/// Pearson test of independence for an r×c contingency table. Columns whose
/// expected count in some row falls below `min_expected` are pooled with
/// their right neighbour (the last with its left); all-zero rows are dropped.
ChiSquareResult independence(const std::vector<std::vector<std::uint64_t>>& table,
                             double min_expected = 5.0);

/// Two-sample homogeneity test on histograms over the same ordered bins.
/// Equivalent to independence() on the 2×K table.
ChiSquareResult two_sample(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                           double min_expected = 5.0);

/// Histogram of integer values over [lo, hi]; values are clamped.
std::vector<std::uint64_t> histogram(const std::vector<std::int64_t>& values, std::int64_t lo,
                                     std::int64_t hi);

struct Summary {
  double mean = 0.0;
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

Summary summarize(const std::vector<double>& values);

}  // namespace xoslab::stats
