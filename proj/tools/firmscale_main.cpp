// Command-line front end: validate / analyze / window / synth / report.
// Flag parsing only; the command logic lives in the library so it can be
// exercised directly by the test suites.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "firmscale/commands.hpp"

namespace {

using firmscale::AnalysisRequest;
using firmscale::SynthSpec;

// Raw flag values for one subcommand, converted after parsing.
struct RawOptions {
  std::string input;
  std::string synth_model;
  std::string schema_file;
  std::string col_firm_id, col_year, col_classification;
  std::string col_sales, col_employees, col_assets;
  std::string measure = "sales";
  std::string prefix;
  std::string years;
  int bins = 20;
  long min_count = 5;
  double max_growth_pct = 1000.0;
  std::string out_dir = ".";
  std::string format = "tsv";
  std::string name;
  bool dump_observations = false;

  // generator settings
  long firms = 1000;
  int n_years = 2;
  std::uint64_t seed = 0;
  double smin = 1.0;
  double smax = 1e6;
  int start_year = 1980;
  std::string classification = "9999";
  double sigma_eps = 0.2;
  double unit_sigma = 0.2;
  double beta = 0.25;
  double scale_a = 1.0;
  std::string schedule;

  // window settings
  int window_len = 5;
  double se_threshold = 0.1;
  int persistence = 3;

  std::string sectors;
};

std::pair<int, int> parse_year_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("--years expects A:B, got '" + text + "'");
  }
  try {
    const int a = std::stoi(text.substr(0, colon));
    const int b = std::stoi(text.substr(colon + 1));
    return {a, b};
  } catch (const std::exception&) {
    throw std::invalid_argument("--years expects A:B, got '" + text + "'");
  }
}

std::map<int, long> parse_schedule(const std::string& text) {
  std::map<int, long> schedule;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const auto item = text.substr(start, end - start);
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("--schedule expects YEAR:COUNT pairs, got '" +
                                  item + "'");
    }
    try {
      schedule[std::stoi(item.substr(0, colon))] =
          std::stol(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("--schedule expects YEAR:COUNT pairs, got '" +
                                  item + "'");
    }
    start = end + 1;
  }
  return schedule;
}

std::vector<std::pair<std::string, std::string>> parse_sectors(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> sectors;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const auto item = text.substr(start, end - start);
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--sectors expects NAME=PREFIX pairs, got '" +
                                  item + "'");
    }
    sectors.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    start = end + 1;
  }
  return sectors;
}

SynthSpec build_synth_spec(const RawOptions& raw, const std::string& model) {
  SynthSpec spec;
  spec.model = model;
  spec.cfg.n_firms = raw.firms;
  spec.cfg.n_years = raw.n_years;
  spec.cfg.seed = raw.seed;
  spec.cfg.s_min = raw.smin;
  spec.cfg.s_max = raw.smax;
  spec.cfg.start_year = raw.start_year;
  spec.cfg.classification = raw.classification;
  spec.sigma_eps = raw.sigma_eps;
  spec.unit_sigma = raw.unit_sigma;
  spec.beta = raw.beta;
  spec.scale_a = raw.scale_a;
  if (!raw.schedule.empty()) spec.schedule = parse_schedule(raw.schedule);
  return spec;
}

AnalysisRequest build_request(const RawOptions& raw) {
  AnalysisRequest request;
  if (!raw.input.empty()) request.input = raw.input;
  if (!raw.synth_model.empty()) {
    request.synth = build_synth_spec(raw, raw.synth_model);
  }
  // precedence: explicit column flags > schema file > built-in defaults
  if (!raw.schema_file.empty()) {
    request.schema = firmscale::load_schema_file(raw.schema_file);
  }
  if (!raw.col_firm_id.empty()) request.schema.firm_id = raw.col_firm_id;
  if (!raw.col_year.empty()) request.schema.year = raw.col_year;
  if (!raw.col_classification.empty()) {
    request.schema.classification = raw.col_classification;
  }
  if (!raw.col_sales.empty()) request.schema.sales = raw.col_sales;
  if (!raw.col_employees.empty()) request.schema.employees = raw.col_employees;
  if (!raw.col_assets.empty()) request.schema.assets = raw.col_assets;

  request.measure = firmscale::measure_from_string(raw.measure);
  if (!raw.prefix.empty()) {
    request.prefix = firmscale::ClassificationCode(raw.prefix);
  }
  if (!raw.years.empty()) request.years = parse_year_range(raw.years);
  request.n_bins = raw.bins;
  request.min_count = raw.min_count;
  request.max_growth_pct = raw.max_growth_pct;
  request.out_dir = raw.out_dir;
  request.format = firmscale::output_format_from_string(raw.format);
  request.name = raw.name;
  request.dump_observations = raw.dump_observations;
  return request;
}

CLI::Option* add_input_options(CLI::App* cmd, RawOptions& raw,
                               bool allow_synth) {
  auto* input = cmd->add_option("--input", raw.input,
                                "panel file (delimited, header row)");
  if (allow_synth) {
    cmd->add_option("--synth", raw.synth_model,
                    "generate the panel instead of reading one "
                    "(gibrat|units|laplace|emerging)");
  }
  cmd->add_option("--schema", raw.schema_file,
                  "key=value file mapping logical fields to column names");
  cmd->add_option("--col-firm-id", raw.col_firm_id, "firm id column name");
  cmd->add_option("--col-year", raw.col_year, "year column name");
  cmd->add_option("--col-classification", raw.col_classification,
                  "classification column name");
  cmd->add_option("--col-sales", raw.col_sales, "sales column name");
  cmd->add_option("--col-employees", raw.col_employees,
                  "employees column name");
  cmd->add_option("--col-assets", raw.col_assets, "assets column name");
  return input;
}

void add_synth_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--firms", raw.firms, "number of firms");
  cmd->add_option("--n-years", raw.n_years, "panel length in years");
  cmd->add_option("--seed", raw.seed, "generator seed");
  cmd->add_option("--smin", raw.smin, "initial-size range lower bound");
  cmd->add_option("--smax", raw.smax, "initial-size range upper bound");
  cmd->add_option("--start-year", raw.start_year, "first panel year");
  cmd->add_option("--classification", raw.classification,
                  "classification code for generated firms");
  cmd->add_option("--sigma-eps", raw.sigma_eps, "gibrat: growth noise sd");
  cmd->add_option("--unit-sigma", raw.unit_sigma,
                  "units: per-unit shock sd, in (0, 0.5]");
  cmd->add_option("--beta", raw.beta, "laplace/emerging: scaling exponent");
  cmd->add_option("--scale-a", raw.scale_a,
                  "laplace/emerging: sigma at unit size");
  cmd->add_option("--schedule", raw.schedule,
                  "emerging: YEAR:COUNT[,YEAR:COUNT...] cumulative entries");
}

void add_pipeline_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--measure", raw.measure, "sales|employees|assets");
  cmd->add_option("--prefix", raw.prefix, "classification prefix filter");
  cmd->add_option("--years", raw.years, "inclusive year filter A:B");
  cmd->add_option("--bins", raw.bins, "number of log-size bins");
  cmd->add_option("--min-count", raw.min_count,
                  "minimum observations per retained bin");
  cmd->add_option("--max-growth-pct", raw.max_growth_pct,
                  "discard growth above this percentage");
  cmd->add_option("--out", raw.out_dir, "output directory");
  cmd->add_option("--format", raw.format, "tsv|jsonl");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"firm growth-rate scaling analysis"};
  app.require_subcommand(1);

  RawOptions raw_validate, raw_analyze, raw_window, raw_synth, raw_report;
  raw_window.bins = 10;  // new-industry windows default to coarser binning
  std::string synth_model;

  auto* validate = app.add_subcommand(
      "validate", "ingest a panel file and print a validation report");
  add_input_options(validate, raw_validate, false)->required();

  auto* analyze = app.add_subcommand(
      "analyze", "bin initial sizes and fit the fluctuation power law");
  add_input_options(analyze, raw_analyze, true);
  add_synth_options(analyze, raw_analyze);
  add_pipeline_options(analyze, raw_analyze);
  analyze->add_option("--name", raw_analyze.name,
                      "label for the fit summary row");
  analyze->add_flag("--dump-observations", raw_analyze.dump_observations,
                    "also write the per-observation audit table");

  auto* window = app.add_subcommand(
      "window", "moving pooled-window fits and convergence detection");
  add_input_options(window, raw_window, true);
  add_synth_options(window, raw_window);
  add_pipeline_options(window, raw_window);
  window->add_option("--name", raw_window.name, "label for the series");
  window->add_option("--window-len", raw_window.window_len,
                     "window length in years");
  window->add_option("--se-threshold", raw_window.se_threshold,
                     "slope standard-error convergence threshold");
  window->add_option("--persistence", raw_window.persistence,
                     "consecutive windows required below threshold");

  auto* synth = app.add_subcommand(
      "synth", "write a synthetic panel with known scaling behavior");
  synth->add_option("model", synth_model, "gibrat|units|laplace|emerging")
      ->required();
  add_synth_options(synth, raw_synth);
  synth->add_option("--out", raw_synth.out_dir, "output directory");

  auto* report = app.add_subcommand(
      "report", "fit several classification prefixes into one sector table");
  add_input_options(report, raw_report, true);
  add_synth_options(report, raw_report);
  add_pipeline_options(report, raw_report);
  report->add_option("--sectors", raw_report.sectors,
                     "NAME=PREFIX[,NAME=PREFIX...] rows to fit")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return firmscale::kExitUsage;
  }

  return firmscale::run_cli_command(
      [&] {
        if (validate->parsed()) {
          firmscale::cmd_validate(build_request(raw_validate), std::cout);
        } else if (analyze->parsed()) {
          firmscale::cmd_analyze(build_request(raw_analyze), std::cout);
        } else if (window->parsed()) {
          firmscale::WindowParams params;
          params.window_length = raw_window.window_len;
          params.se_threshold = raw_window.se_threshold;
          params.persistence = raw_window.persistence;
          firmscale::cmd_window(build_request(raw_window), params, std::cout);
        } else if (synth->parsed()) {
          firmscale::cmd_synth(build_synth_spec(raw_synth, synth_model),
                               raw_synth.out_dir, std::cout);
        } else if (report->parsed()) {
          firmscale::cmd_report(build_request(raw_report),
                                parse_sectors(raw_report.sectors), std::cout);
        }
      },
      std::cerr);
}
