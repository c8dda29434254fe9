#include "firmscale/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace firmscale {

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "tsv") return OutputFormat::kTsv;
  if (name == "jsonl") return OutputFormat::kJsonl;
  throw std::invalid_argument("unknown output format '" + std::string(name) +
                              "' (expected tsv or jsonl)");
}

std::string_view file_extension(OutputFormat format) {
  return format == OutputFormat::kTsv ? "tsv" : "jsonl";
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

std::string fixed(double value, int decimals) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

using ordered_json = nlohmann::ordered_json;

}  // namespace

std::string render_sector_table(std::span<const SectorFitRow> rows) {
  std::ostringstream out;
  out << "Name\tSlope\tIntercept\tRSqr\tStd-Err\tNo.Data Points\tStatus\n";
  for (const auto& row : rows) {
    out << row.name << '\t';
    if (row.fit) {
      out << fixed(row.fit->slope, 3) << '\t'
          << fixed(row.fit->intercept_log10(), 3) << '\t'
          << fixed(row.fit->r_squared, 3) << '\t'
          << fixed(row.fit->slope_std_err, 4) << '\t' << row.n_observations
          << '\t' << row.status << '\n';
    } else {
      out << "\t\t\t\t\t" << row.status << '\n';
    }
  }
  return out.str();
}

void write_bin_table(std::ostream& out, const BinTable& table,
                     OutputFormat format) {
  if (format == OutputFormat::kTsv) {
    out << "bin\tlower\tupper\tcenter\tcount\tsigma\tmean_log_growth\n";
    for (const auto& row : table.rows) {
      out << row.index << '\t' << format_double(row.lower) << '\t'
          << format_double(row.upper) << '\t' << format_double(row.center)
          << '\t' << row.count << '\t' << format_double(row.sigma) << '\t'
          << format_double(row.mean_log_growth) << '\n';
    }
    return;
  }
  for (const auto& row : table.rows) {
    ordered_json j{{"bin", row.index},       {"lower", row.lower},
                   {"upper", row.upper},     {"center", row.center},
                   {"count", row.count},     {"sigma", row.sigma},
                   {"mean_log_growth", row.mean_log_growth}};
    out << j.dump() << '\n';
  }
}

void write_fit_summary(std::ostream& out, const SectorFitRow& row,
                       OutputFormat format) {
  if (format == OutputFormat::kTsv) {
    out << "Name\tSlope\tIntercept\tRSqr\tStd-Err\tNo.Data Points\t"
           "Intercept-Ln\tResid-Std-Err\tBeta\tN-Bins\tStatus\n";
    out << row.name << '\t';
    if (row.fit) {
      const auto& f = *row.fit;
      out << format_double(f.slope) << '\t'
          << format_double(f.intercept_log10()) << '\t'
          << format_double(f.r_squared) << '\t'
          << format_double(f.slope_std_err) << '\t' << row.n_observations
          << '\t' << format_double(f.intercept) << '\t'
          << format_double(f.resid_std_err) << '\t'
          << format_double(f.beta()) << '\t' << f.n_points << '\t'
          << row.status << '\n';
    } else {
      out << "\t\t\t\t" << row.n_observations << "\t\t\t\t\t" << row.status
          << '\n';
    }
    return;
  }
  ordered_json j;
  j["name"] = row.name;
  if (row.fit) {
    const auto& f = *row.fit;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept_log10();
    j["rsqr"] = f.r_squared;
    j["std_err"] = f.slope_std_err;
    j["n_data_points"] = row.n_observations;
    j["intercept_ln"] = f.intercept;
    j["resid_std_err"] = f.resid_std_err;
    j["beta"] = f.beta();
    j["n_bins"] = f.n_points;
  } else {
    j["n_data_points"] = row.n_observations;
  }
  j["status"] = row.status;
  out << j.dump() << '\n';
}

void write_plot_data(std::ostream& out, const BinTable& table,
                     const RegressionFit& fit, OutputFormat format) {
  if (format == OutputFormat::kTsv) {
    out << "ln_center\tln_sigma\tfit_ln_sigma\n";
    for (const auto& row : table.rows) {
      if (row.sigma <= 0.0) continue;
      const double x = std::log(row.center);
      out << format_double(x) << '\t' << format_double(std::log(row.sigma))
          << '\t' << format_double(fit.intercept + fit.slope * x) << '\n';
    }
    return;
  }
  for (const auto& row : table.rows) {
    if (row.sigma <= 0.0) continue;
    const double x = std::log(row.center);
    ordered_json j{{"ln_center", x},
                   {"ln_sigma", std::log(row.sigma)},
                   {"fit_ln_sigma", fit.intercept + fit.slope * x}};
    out << j.dump() << '\n';
  }
}

void write_window_series(std::ostream& out, const WindowSeries& series,
                         OutputFormat format) {
  if (format == OutputFormat::kTsv) {
    out << "start_year\tbeta\tslope_std_err\tr_squared\tn_obs\tn_firms\t"
           "status\tresid_std_err\n";
    for (const auto& e : series.entries) {
      out << e.start_year << '\t';
      if (e.fit) {
        out << format_double(e.fit->beta()) << '\t'
            << format_double(e.fit->slope_std_err) << '\t'
            << format_double(e.fit->r_squared) << '\t' << e.n_obs << '\t'
            << e.n_firms << '\t' << e.status << '\t'
            << format_double(e.fit->resid_std_err) << '\n';
      } else {
        out << "\t\t\t" << e.n_obs << '\t' << e.n_firms << '\t' << e.status
            << "\t\n";
      }
    }
    return;
  }
  for (const auto& e : series.entries) {
    ordered_json j;
    j["start_year"] = e.start_year;
    if (e.fit) {
      j["beta"] = e.fit->beta();
      j["slope_std_err"] = e.fit->slope_std_err;
      j["r_squared"] = e.fit->r_squared;
    }
    j["n_obs"] = e.n_obs;
    j["n_firms"] = e.n_firms;
    j["status"] = e.status;
    if (e.fit) j["resid_std_err"] = e.fit->resid_std_err;
    out << j.dump() << '\n';
  }
}

void write_convergence(std::ostream& out, const ConvergenceResult& result) {
  out << "series=" << result.series_ref
      << " threshold=" << format_double(result.threshold)
      << " persistence=" << result.persistence << " converged="
      << (result.converged ? "true" : "false");
  if (result.onset_year) out << " onset=" << *result.onset_year;
  out << '\n';
}

}  // namespace firmscale
