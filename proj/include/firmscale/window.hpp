#ifndef FIRMSCALE_WINDOW_HPP
#define FIRMSCALE_WINDOW_HPP

#include <optional>
#include <string>
#include <vector>

#include "firmscale/stats.hpp"

namespace firmscale {

inline constexpr const char* kWindowOk = "ok";
inline constexpr const char* kWindowInsufficientData = "insufficient-data";

struct WindowOptions {
  int window_length = 5;  // years pooled per window
  int n_bins = 10;
  long min_count = 5;
  double max_growth_pct = 1000.0;
};

struct WindowEntry {
  int start_year = 0;
  std::optional<RegressionFit> fit;  // empty = failure marker
  std::string status = kWindowOk;
  long n_obs = 0;
  long n_firms = 0;
};

struct WindowSeries {
  std::vector<WindowEntry> entries;  // start years increase by 1
  int window_length = 5;
  int n_bins = 10;
  std::string label;
};

// One pooled regression per feasible start year y: observations with
// year0 in [y, y+window_length-1], which needs size data through
// y+window_length. Windows whose data is too sparse to bin or fit get a
// failure marker instead of a fit. Throws DataError when the panel spans
// fewer than window_length + 1 years.
WindowSeries moving_window_fits(const FirmPanel& panel, Measure measure,
                                const WindowOptions& options = {});

struct ConvergenceResult {
  bool converged = false;
  std::optional<int> onset_year;
  double threshold = 0.1;
  int persistence = 3;
  std::string series_ref;
};

// Onset is the earliest start year from which slope_std_err < threshold
// holds for persistence consecutive successful entries and for every
// later successful entry; failure markers break the persistence run.
// No onset is a valid result, not an error.
ConvergenceResult detect_convergence(const WindowSeries& series,
                                     double threshold = 0.1,
                                     int persistence = 3);

}  // namespace firmscale

#endif
