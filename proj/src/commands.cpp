#include "firmscale/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "firmscale/errors.hpp"
#include "firmscale/growth.hpp"

namespace firmscale {

namespace {

void check_request(const AnalysisRequest& request) {
  if (request.input.has_value() == request.synth.has_value()) {
    throw std::invalid_argument(
        "exactly one of an input file and a synth spec must be given");
  }
}

FirmPanel acquire_panel(const AnalysisRequest& request) {
  check_request(request);
  if (request.input) return load_panel_file(*request.input, request.schema);
  return run_generator(*request.synth);
}

FirmPanel apply_filters(const AnalysisRequest& request, FirmPanel panel) {
  if (request.prefix) {
    panel = filter_classification(panel, *request.prefix);
    if (panel.empty()) {
      throw DataError("classification prefix '" + request.prefix->digits() +
                      "' matched no records");
    }
  }
  if (request.years) {
    panel = filter_years(panel, request.years->first, request.years->second);
    if (panel.empty()) {
      throw DataError("year range " + std::to_string(request.years->first) +
                      ":" + std::to_string(request.years->second) +
                      " matched no records");
    }
  }
  return panel;
}

std::string compose_name(const AnalysisRequest& request) {
  if (!request.name.empty()) return request.name;
  std::string name;
  if (request.prefix) name += "prefix=" + request.prefix->digits() + " ";
  if (request.years) {
    name += "years=" + std::to_string(request.years->first) + ":" +
            std::to_string(request.years->second) + " ";
  }
  name += "measure=" + std::string(to_string(request.measure));
  return name;
}

std::ofstream open_output(const std::filesystem::path& dir,
                          const std::string& stem, std::string_view ext) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (stem + "." + std::string(ext));
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path.string());
  return out;
}

ObservationSet observations_for(const AnalysisRequest& request,
                                const FirmPanel& panel) {
  auto obs = filter_outliers(
      extract_growth_observations(panel, request.measure),
      request.max_growth_pct);
  if (obs.observations.empty()) {
    throw DataError("no growth observations after filtering (examined " +
                    std::to_string(obs.candidates_examined()) +
                    " candidate pairs)");
  }
  return obs;
}

}  // namespace

FirmPanel run_generator(const SynthSpec& spec) {
  if (spec.model == "gibrat") return gen_gibrat(spec.cfg, spec.sigma_eps);
  if (spec.model == "units") return gen_units(spec.cfg, spec.unit_sigma);
  if (spec.model == "laplace") {
    return gen_power_law_laplace(spec.cfg, spec.beta, spec.scale_a);
  }
  if (spec.model == "emerging") {
    return gen_emerging_industry(spec.cfg, spec.beta, spec.scale_a,
                                 spec.schedule);
  }
  throw std::invalid_argument(
      "unknown synth model '" + spec.model +
      "' (expected gibrat, units, laplace or emerging)");
}

void cmd_validate(const AnalysisRequest& request, std::ostream& out) {
  const auto panel = acquire_panel(request);
  out << "source: " << panel.provenance() << "\n"
      << validate_panel(panel);
}

void cmd_analyze(const AnalysisRequest& request, std::ostream& out) {
  const auto panel = apply_filters(request, acquire_panel(request));
  const auto obs = observations_for(request, panel);
  const auto table = log_bin(obs, request.n_bins, request.min_count);
  const auto fit = fit_power_law(table);

  SectorFitRow row;
  row.name = compose_name(request);
  row.fit = fit;
  row.n_observations = static_cast<long>(obs.observations.size());
  row.n_bins_used = fit.n_points;

  const auto ext = file_extension(request.format);
  {
    auto f = open_output(request.out_dir, "bins", ext);
    write_bin_table(f, table, request.format);
  }
  {
    auto f = open_output(request.out_dir, "fit", ext);
    write_fit_summary(f, row, request.format);
  }
  {
    auto f = open_output(request.out_dir, "plotdata", ext);
    write_plot_data(f, table, fit, request.format);
  }
  if (request.dump_observations) {
    auto f = open_output(request.out_dir, "observations", "tsv");
    write_observations(f, obs);
  }

  out << row.name << ": beta=" << format_double(fit.beta())
      << " r_squared=" << format_double(fit.r_squared)
      << " slope_std_err=" << format_double(fit.slope_std_err) << " n_obs="
      << row.n_observations << " bins=" << fit.n_points << "/"
      << table.n_bins_requested;
  if (!table.dropped.empty()) {
    out << " (dropped " << table.dropped.size() << " sparse bins)";
  }
  const auto& log = obs.filter_log;
  out << " excluded: missing=" << log.missing()
      << " nonpositive=" << log.nonpositive() << " outlier=" << log.outlier()
      << "\n";
}

void cmd_window(const AnalysisRequest& request, const WindowParams& params,
                std::ostream& out) {
  const auto panel = apply_filters(request, acquire_panel(request));
  WindowOptions options;
  options.window_length = params.window_length;
  options.n_bins = request.n_bins;
  options.min_count = request.min_count;
  options.max_growth_pct = request.max_growth_pct;

  auto series = moving_window_fits(panel, request.measure, options);
  series.label = compose_name(request);
  const auto convergence =
      detect_convergence(series, params.se_threshold, params.persistence);

  const auto ext = file_extension(request.format);
  {
    auto f = open_output(request.out_dir, "windows", ext);
    write_window_series(f, series, request.format);
  }
  {
    std::filesystem::create_directories(request.out_dir);
    const auto path = request.out_dir / "convergence.txt";
    std::ofstream f(path);
    if (!f) throw DataError("cannot open output file: " + path.string());
    write_convergence(f, convergence);
  }

  long ok = 0;
  for (const auto& e : series.entries) {
    if (e.fit) ++ok;
  }
  out << series.label << ": " << series.entries.size() << " windows (" << ok
      << " fitted)\n";
  if (convergence.converged) {
    out << "converged at " << *convergence.onset_year << "\n";
  } else {
    out << "no convergence onset\n";
  }
}

void cmd_synth(const SynthSpec& spec, const std::filesystem::path& out_dir,
               std::ostream& out) {
  const auto panel = run_generator(spec);
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / "panel.tsv";
  write_panel_file(path, panel);
  out << "model=" << spec.model << " seed=" << spec.cfg.seed
      << " records=" << panel.size() << " firms=" << panel.firm_count()
      << " -> " << path.string() << "\n";
}

void cmd_report(const AnalysisRequest& request,
                const std::vector<std::pair<std::string, std::string>>& sectors,
                std::ostream& out) {
  if (sectors.empty()) {
    throw std::invalid_argument("report needs at least one name=prefix pair");
  }
  auto base = acquire_panel(request);
  if (request.years) {
    base = filter_years(base, request.years->first, request.years->second);
  }

  std::vector<SectorFitRow> rows;
  for (const auto& [name, prefix_digits] : sectors) {
    SectorFitRow row;
    row.name = name;
    try {
      const ClassificationCode prefix(prefix_digits);
      const auto panel = filter_classification(base, prefix);
      auto obs = filter_outliers(
          extract_growth_observations(panel, request.measure),
          request.max_growth_pct);
      row.n_observations = static_cast<long>(obs.observations.size());
      const auto table = log_bin(obs, request.n_bins, request.min_count);
      const auto fit = fit_power_law(table);
      row.fit = fit;
      row.n_bins_used = fit.n_points;
    } catch (const FitError&) {
      row.status = "insufficient-data";
    } catch (const DataError&) {
      row.status = "insufficient-data";
    }
    rows.push_back(std::move(row));
  }

  const auto text = render_sector_table(rows);
  std::filesystem::create_directories(request.out_dir);
  const auto path = request.out_dir / "sector_table.tsv";
  std::ofstream f(path);
  if (!f) throw DataError("cannot open output file: " + path.string());
  f << text;
  out << text;
}

int run_cli_command(const std::function<void()>& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const FitError& e) {
    err << "fit error: " << e.what() << "\n";
    return kExitFit;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace firmscale
