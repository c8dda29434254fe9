#include "firmscale/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "firmscale/errors.hpp"

namespace firmscale {

int BinTable::partition_index(double s0) const {
  const auto [lo, hi] = log_range;
  if (hi <= lo) return -1;
  const double x = std::log(s0);
  if (x < lo || x > hi) return -1;
  const double t = (x - lo) / (hi - lo) * n_bins_requested;
  int idx = static_cast<int>(t);
  if (idx >= n_bins_requested) idx = n_bins_requested - 1;  // s0 == s_max
  if (idx < 0) idx = 0;
  return idx;
}

BinTable log_bin(const ObservationSet& obs, int n_bins, long min_count) {
  if (n_bins < 2) throw std::invalid_argument("n_bins must be >= 2");
  if (min_count < 2) throw std::invalid_argument("min_count must be >= 2");

  double s_min = 0.0;
  double s_max = 0.0;
  bool first = true;
  for (const auto& o : obs.observations) {
    if (first) {
      s_min = s_max = o.s0;
      first = false;
    } else {
      s_min = std::min(s_min, o.s0);
      s_max = std::max(s_max, o.s0);
    }
  }
  if (first || !(s_max > s_min)) {
    throw FitError("need at least 2 observations with distinct initial sizes");
  }

  BinTable table;
  table.n_bins_requested = n_bins;
  table.log_range = {std::log(s_min), std::log(s_max)};
  table.min_count = min_count;

  std::vector<std::vector<double>> growths(static_cast<std::size_t>(n_bins));
  for (const auto& o : obs.observations) {
    const int idx = table.partition_index(o.s0);
    growths[static_cast<std::size_t>(idx)].push_back(o.log_growth);
  }

  const auto [lo, hi] = table.log_range;
  const double width = (hi - lo) / n_bins;
  for (int b = 0; b < n_bins; ++b) {
    const auto& values = growths[static_cast<std::size_t>(b)];
    const long count = static_cast<long>(values.size());
    const double center = std::exp(lo + (b + 0.5) * width);
    if (count < min_count) {
      table.dropped.push_back({b, count, center});
      continue;
    }
    BinRow row;
    row.index = b;
    row.lower = std::exp(lo + b * width);
    row.upper = std::exp(lo + (b + 1) * width);
    row.center = center;
    row.count = count;
    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean_log_growth = sum / static_cast<double>(count);
    double ss = 0.0;
    for (double v : values) {
      const double d = v - row.mean_log_growth;
      ss += d * d;
    }
    row.sigma = std::sqrt(ss / static_cast<double>(count - 1));
    table.rows.push_back(row);
  }

  if (table.rows.empty()) {
    throw FitError("every bin holds fewer than " + std::to_string(min_count) +
                   " observations; data too sparse to fit");
  }
  return table;
}

double RegressionFit::intercept_log10() const {
  return intercept / std::log(10.0);
}

RegressionFit ols(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("ols: xs and ys differ in length");
  }
  const long n = static_cast<long>(xs.size());
  if (n < 3) throw FitError("ols needs at least 3 points");

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (long i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  double sst = 0.0;
  for (long i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    sst += dy * dy;
  }
  if (sxx == 0.0) throw FitError("ols: zero variance in x");
  if (sst == 0.0) throw FitError("ols: zero variance in y");

  RegressionFit fit;
  fit.n_points = n;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;

  double sse = 0.0;
  for (long i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    sse += r * r;
  }
  fit.r_squared = std::clamp(1.0 - sse / sst, 0.0, 1.0);
  fit.slope_std_err = std::sqrt(sse / (static_cast<double>(n - 2) * sxx));
  fit.resid_std_err = std::sqrt(sse / static_cast<double>(n - 2));
  return fit;
}

RegressionFit fit_power_law(const BinTable& table) {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(table.rows.size());
  ys.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.sigma <= 0.0) continue;  // log undefined; excluded
    xs.push_back(std::log(row.center));
    ys.push_back(std::log(row.sigma));
  }
  if (xs.size() < 3) {
    throw FitError("fewer than 3 bins with positive sigma (" +
                   std::to_string(xs.size()) + " usable of " +
                   std::to_string(table.rows.size()) + ")");
  }
  return ols(xs, ys);
}

LaplaceFit fit_laplace(std::span<const double> values) {
  const long n = static_cast<long>(values.size());
  if (n < 2) throw FitError("laplace fit needs at least 2 values");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double median = (sorted.size() % 2 == 1)
                            ? sorted[mid]
                            : 0.5 * (sorted[mid - 1] + sorted[mid]);

  double abs_dev = 0.0;
  for (double v : sorted) abs_dev += std::fabs(v - median);
  const double scale = abs_dev / static_cast<double>(n);
  if (scale <= 0.0) throw FitError("laplace fit: zero scale (all values equal)");

  LaplaceFit fit;
  fit.location = median;
  fit.scale = scale;
  fit.n = n;
  fit.log_likelihood =
      -static_cast<double>(n) * std::log(2.0 * scale) - abs_dev / scale;
  return fit;
}

LaplaceFit fit_conditional_laplace(const ObservationSet& obs,
                                   const BinTable& table, std::size_t row) {
  if (row >= table.rows.size()) {
    throw std::invalid_argument("bin row index out of range");
  }
  const int target = table.rows[row].index;
  std::vector<double> values;
  for (const auto& o : obs.observations) {
    if (table.partition_index(o.s0) == target) values.push_back(o.log_growth);
  }
  if (values.size() < 10) {
    throw FitError("conditional laplace fit needs >= 10 observations in the "
                   "bin, got " + std::to_string(values.size()));
  }
  return fit_laplace(values);
}

}  // namespace firmscale
