#include "xoslab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace xoslab::stats {

double chi_square_sf(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  if (!(statistic > 0.0)) return 1.0;
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

ChiSquareResult goodness_of_fit(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& probabilities, double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw std::invalid_argument("goodness_of_fit: observed and probability vectors differ in size");
  }
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  std::vector<double> obs;
  std::vector<double> expd;
  double acc_o = 0.0;
  double acc_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    acc_o += static_cast<double>(observed[i]);
    acc_e += probabilities[i] * total;
    if (acc_e >= min_expected) {
      obs.push_back(acc_o);
      expd.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (expd.empty()) {
      obs.push_back(acc_o);
      expd.push_back(acc_e);
    } else {
      obs.back() += acc_o;
      expd.back() += acc_e;
    }
  }
  ChiSquareResult r;
  r.bins = obs.size();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (expd[i] <= 0.0) {
      if (obs[i] > 0.0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    const double d = obs[i] - expd[i];
    r.statistic += d * d / expd[i];
  }
  r.dof = obs.size() > 0 ? obs.size() - 1 : 0;
  r.p_value = std::isinf(r.statistic) ? 0.0 : chi_square_sf(r.statistic, r.dof);
  return r;
}

ChiSquareResult uniformity(const std::vector<std::uint64_t>& observed, double min_expected) {
  const std::vector<double> p(observed.size(), 1.0 / static_cast<double>(observed.size()));
  return goodness_of_fit(observed, p, min_expected);
}

ChiSquareResult independence(const std::vector<std::vector<std::uint64_t>>& table, double min_expected) {
  if (table.empty()) throw std::invalid_argument("independence: empty table");
  const std::size_t cols = table.front().size();
  std::vector<std::vector<double>> rows;
  for (const auto& row : table) {
    if (row.size() != cols) throw std::invalid_argument("independence: ragged table");
    if (std::accumulate(row.begin(), row.end(), std::uint64_t{0}) == 0) continue;
    rows.emplace_back(row.begin(), row.end());
  }
  ChiSquareResult r;
  if (rows.size() < 2) return r;

  std::vector<double> row_tot(rows.size(), 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row_tot[i] = std::accumulate(rows[i].begin(), rows[i].end(), 0.0);
    grand += row_tot[i];
  }
  const double min_row_share = *std::min_element(row_tot.begin(), row_tot.end()) / grand;

  // Pool columns left to right until each pooled column's smallest expected
  // cell reaches min_expected.
  std::vector<std::vector<double>> pooled(rows.size());
  std::vector<double> acc(rows.size(), 0.0);
  double acc_col = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      acc[i] += rows[i][j];
      acc_col += rows[i][j];
    }
    if (acc_col * min_row_share >= min_expected) {
      for (std::size_t i = 0; i < rows.size(); ++i) pooled[i].push_back(acc[i]);
      std::fill(acc.begin(), acc.end(), 0.0);
      acc_col = 0.0;
    }
  }
  if (acc_col > 0.0) {
    if (pooled.front().empty()) {
      for (std::size_t i = 0; i < rows.size(); ++i) pooled[i].push_back(acc[i]);
    } else {
      for (std::size_t i = 0; i < rows.size(); ++i) pooled[i].back() += acc[i];
    }
  }

  const std::size_t k = pooled.front().size();
  r.bins = k;
  if (k < 2) return r;
  std::vector<double> col_tot(k, 0.0);
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) col_tot[j] += pooled[i][j];
  }
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double e = row_tot[i] * col_tot[j] / grand;
      const double d = pooled[i][j] - e;
      r.statistic += d * d / e;
    }
  }
  r.dof = (pooled.size() - 1) * (k - 1);
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

ChiSquareResult two_sample(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                           double min_expected) {
  if (a.size() != b.size()) throw std::invalid_argument("two_sample: histograms differ in size");
  return independence({a, b}, min_expected);
}

std::vector<std::uint64_t> histogram(const std::vector<std::int64_t>& values, std::int64_t lo,
                                     std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("histogram: empty range");
  std::vector<std::uint64_t> h(static_cast<std::size_t>(hi - lo + 1), 0);
  for (auto v : values) {
    const auto c = std::clamp(v, lo, hi);
    ++h[static_cast<std::size_t>(c - lo)];
  }
  return h;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  // Welford.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  s.mean = mean;
  s.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  return s;
}

}  // namespace xoslab::stats
