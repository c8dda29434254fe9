#include "firmscale/window.hpp"

#include <set>
#include <stdexcept>

#include "firmscale/errors.hpp"

namespace firmscale {

WindowSeries moving_window_fits(const FirmPanel& panel, Measure measure,
                                const WindowOptions& options) {
  if (options.window_length < 1) {
    throw std::invalid_argument("window_length must be >= 1");
  }
  const auto span = panel.year_span();
  if (!span || span->second - span->first < options.window_length) {
    throw DataError("panel spans fewer than " +
                    std::to_string(options.window_length + 1) +
                    " years; no feasible window");
  }

  const auto all = filter_outliers(extract_growth_observations(panel, measure),
                                   options.max_growth_pct);

  WindowSeries series;
  series.window_length = options.window_length;
  series.n_bins = options.n_bins;
  series.label = panel.provenance() + "|" + std::string(to_string(measure));

  // a window starting at y pools year0 in [y, y+len-1], so the last
  // feasible start leaves one year of data for the final S1
  for (int y = span->first; y <= span->second - options.window_length; ++y) {
    const auto pooled = pool(all, y, y + options.window_length - 1);
    WindowEntry entry;
    entry.start_year = y;
    entry.n_obs = static_cast<long>(pooled.observations.size());
    std::set<std::string_view> firms;
    for (const auto& o : pooled.observations) firms.insert(o.firm_id);
    entry.n_firms = static_cast<long>(firms.size());
    try {
      const auto table = log_bin(pooled, options.n_bins, options.min_count);
      entry.fit = fit_power_law(table);
      entry.status = kWindowOk;
    } catch (const FitError&) {
      entry.fit.reset();
      entry.status = kWindowInsufficientData;
    }
    series.entries.push_back(std::move(entry));
  }
  return series;
}

ConvergenceResult detect_convergence(const WindowSeries& series,
                                     double threshold, int persistence) {
  if (series.entries.empty()) {
    throw std::invalid_argument("window series is empty");
  }
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("threshold must be positive");
  }
  if (persistence < 1) {
    throw std::invalid_argument("persistence must be >= 1");
  }

  ConvergenceResult result;
  result.threshold = threshold;
  result.persistence = persistence;
  result.series_ref = series.label;

  const auto& entries = series.entries;
  const auto n = static_cast<long>(entries.size());
  auto below = [&](long i) {
    return entries[i].fit && entries[i].fit->slope_std_err < threshold;
  };

  for (long i = 0; i + persistence <= n; ++i) {
    bool run_ok = true;
    for (long j = i; j < i + persistence; ++j) {
      if (!below(j)) {  // failure markers break the run
        run_ok = false;
        break;
      }
    }
    if (!run_ok) continue;
    bool sustained = true;
    for (long j = i + persistence; j < n; ++j) {
      if (entries[j].fit && !below(j)) {
        sustained = false;
        break;
      }
    }
    if (sustained) {
      result.converged = true;
      result.onset_year = entries[i].start_year;
      break;
    }
  }
  return result;
}

}  // namespace firmscale
