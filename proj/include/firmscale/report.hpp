#ifndef FIRMSCALE_REPORT_HPP
#define FIRMSCALE_REPORT_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "firmscale/stats.hpp"
#include "firmscale/window.hpp"

namespace firmscale {

enum class OutputFormat { kTsv, kJsonl };

OutputFormat output_format_from_string(std::string_view name);
std::string_view file_extension(OutputFormat format);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// One line of a sector summary table: the regression fit plus the pooled
// observation count behind it (the table's data-point column counts
// observations, not regression points).
struct SectorFitRow {
  std::string name;
  std::optional<RegressionFit> fit;
  long n_observations = 0;
  long n_bins_used = 0;
  std::string status = "ok";  // or "insufficient-data"
};

// Tab-separated table with columns Name, Slope, Intercept, RSqr, Std-Err,
// No.Data Points, Status. Slope/Intercept/RSqr use 3 decimals, Std-Err 4.
// The Intercept column is in base-10 axes; full-precision values of both
// intercepts live in the fit summary files. Failure rows carry blank
// numerics and status "insufficient-data".
std::string render_sector_table(std::span<const SectorFitRow> rows);

void write_bin_table(std::ostream& out, const BinTable& table,
                     OutputFormat format);
void write_fit_summary(std::ostream& out, const SectorFitRow& row,
                       OutputFormat format);
// Triples (ln center, ln sigma, fitted ln sigma), one row per retained bin.
void write_plot_data(std::ostream& out, const BinTable& table,
                     const RegressionFit& fit, OutputFormat format);
void write_window_series(std::ostream& out, const WindowSeries& series,
                         OutputFormat format);
void write_convergence(std::ostream& out, const ConvergenceResult& result);

}  // namespace firmscale

#endif
