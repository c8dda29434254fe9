#ifndef FIRMSCALE_STATS_HPP
#define FIRMSCALE_STATS_HPP

#include <span>
#include <utility>
#include <vector>

#include "firmscale/growth.hpp"

namespace firmscale {

struct BinRow {
  int index = 0;       // position in the full partition, 0-based
  double lower = 0.0;  // size-space edges; geometric center = sqrt(lower*upper)
  double upper = 0.0;
  double center = 0.0;
  long count = 0;
  double sigma = 0.0;  // sample (n-1) standard deviation of log_growth
  double mean_log_growth = 0.0;
};

struct DroppedBin {
  int index = 0;
  long count = 0;
  double center = 0.0;
};

// Equal-width partition of ln(s0) between the smallest and largest observed
// initial size. rows holds only bins with count >= min_count; the rest are
// listed in dropped.
struct BinTable {
  std::vector<BinRow> rows;
  int n_bins_requested = 0;
  std::pair<double, double> log_range{0.0, 0.0};  // (ln s_min, ln s_max)
  long min_count = 0;
  std::vector<DroppedBin> dropped;

  // Partition index for an initial size inside [s_min, s_max]; interior
  // right edges are exclusive, the last bin includes its right edge.
  int partition_index(double s0) const;
};

// Throws std::invalid_argument for n_bins < 2 or min_count < 2, FitError
// when the observations have fewer than 2 distinct initial sizes or every
// bin falls below min_count.
BinTable log_bin(const ObservationSet& obs, int n_bins, long min_count = 5);

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural-log axes
  double r_squared = 0.0;
  double slope_std_err = 0.0;   // sqrt(SSE / ((n-2) * Sxx))
  double resid_std_err = 0.0;   // sqrt(SSE / (n-2))
  long n_points = 0;

  double beta() const { return -slope; }
  double intercept_log10() const;
};

// Unweighted least squares of y on x. Throws FitError for n < 3, zero
// variance in xs, or zero variance in ys.
RegressionFit ols(std::span<const double> xs, std::span<const double> ys);

// ols over (ln center, ln sigma). Rows with sigma == 0 are excluded;
// fewer than 3 usable rows is a FitError. beta() = -slope is the scaling
// exponent of sigma(s0) = a * s0^(-beta).
RegressionFit fit_power_law(const BinTable& table);

struct LaplaceFit {
  double location = 0.0;
  double scale = 0.0;  // mean absolute deviation from the location
  long n = 0;
  double log_likelihood = 0.0;
};

// Maximum-likelihood Laplace fit: location = sample median, scale = mean
// absolute deviation from it. Throws FitError for n < 2 or zero scale.
LaplaceFit fit_laplace(std::span<const double> values);

// Laplace fit of the log growths falling in the given retained row of
// table (selected by position in table.rows). The bin must hold at least
// 10 observations.
LaplaceFit fit_conditional_laplace(const ObservationSet& obs,
                                   const BinTable& table, std::size_t row);

}  // namespace firmscale

#endif
