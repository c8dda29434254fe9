// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Oracles are the seeded generators with analytically known
// exponents plus closed-form and brute-force regression checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "firmscale/commands.hpp"
#include "firmscale/errors.hpp"
#include "firmscale/growth.hpp"
#include "firmscale/panel.hpp"
#include "firmscale/report.hpp"
#include "firmscale/stats.hpp"
#include "firmscale/synth.hpp"
#include "firmscale/window.hpp"

using namespace firmscale;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report_line(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// shared pipeline: extract, apply the default outlier rule, bin, fit
struct PipelineResult {
  ObservationSet obs;
  BinTable table;
  RegressionFit fit;
};

PipelineResult run_pipeline(const FirmPanel& panel, int n_bins) {
  PipelineResult result;
  result.obs =
      filter_outliers(extract_growth_observations(panel, Measure::kSales));
  result.table = log_bin(result.obs, n_bins, 5);
  result.fit = fit_power_law(result.table);
  return result;
}

SynthConfig laplace_oracle_config() {
  SynthConfig cfg;
  cfg.n_firms = 20000;  // 2 year-pairs each: ~4e4 observations
  cfg.n_years = 3;
  cfg.seed = 11;
  // sales-in-thousands scale; keeps sigma(s_min) = 0.32 so the 1000%
  // outlier rule and the size floor stay far out in the tails
  cfg.s_min = 1e2;
  cfg.s_max = 1e8;
  return cfg;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// criterion 1: beta = 0.25 recovered within +/-0.02 at the 4e4-observation
// scale, R^2 >= 0.95, under 10 seconds
void criterion_1(PipelineResult& keep) {
  const auto start = std::chrono::steady_clock::now();
  const auto panel = gen_power_law_laplace(laplace_oracle_config(), 0.25, 1.0);
  keep = run_pipeline(panel, 20);
  const double elapsed = seconds_since(start);
  const double beta = keep.fit.beta();
  const bool pass = std::fabs(beta - 0.25) <= 0.02 &&
                    keep.fit.r_squared >= 0.95 && elapsed < 10.0;
  report_line(1, pass,
              "laplace oracle beta=" + fmt(beta) + " (target 0.25 +/- 0.02), "
              "r_squared=" + fmt(keep.fit.r_squared) + " (>= 0.95), n_obs=" +
              std::to_string(keep.obs.observations.size()) + ", " +
              fmt(elapsed) + "s (< 10s)");
}

void criterion_2() {
  SynthConfig cfg;
  cfg.n_firms = 10000;
  cfg.n_years = 6;
  cfg.seed = 42;
  const auto result = run_pipeline(gen_gibrat(cfg, 0.2), 20);
  const double beta = result.fit.beta();
  report_line(2, std::fabs(beta) <= 0.02,
              "gibrat oracle beta=" + fmt(beta) + " (target 0 +/- 0.02)");
}

void criterion_3() {
  SynthConfig cfg;
  cfg.n_firms = 10000;
  cfg.n_years = 2;
  cfg.seed = 7;
  cfg.s_min = 10.0;
  cfg.s_max = 1e5;
  const auto result = run_pipeline(gen_units(cfg, 0.2), 20);
  const double beta = result.fit.beta();
  report_line(3, std::fabs(beta - 0.5) <= 0.03,
              "independent-units oracle beta=" + fmt(beta) +
                  " (target 0.5 +/- 0.03)");
}

void criterion_4(const PipelineResult& laplace_run) {
  const double b20 = laplace_run.fit.beta();
  const double b10 = fit_power_law(log_bin(laplace_run.obs, 10, 5)).beta();
  const double b30 = fit_power_law(log_bin(laplace_run.obs, 30, 5)).beta();
  const bool pass = std::fabs(b10 - b20) <= 0.02 && std::fabs(b20 - b30) <= 0.02;
  report_line(4, pass,
              "bin-count robustness beta(10)=" + fmt(b10) + " beta(20)=" +
                  fmt(b20) + " beta(30)=" + fmt(b30) +
                  " (pairwise within 0.02)");
}

// brute-force grid minimizer of the sum of squared residuals
struct GridFit {
  double slope, intercept, resolution;
};

GridFit grid_least_squares(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  auto sse = [&](double m, double b) {
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (m * xs[i] + b);
      total += r * r;
    }
    return total;
  };
  double m_lo = -4.0, m_hi = 4.0, b_lo = -4.0, b_hi = 4.0;
  double best_m = 0.0, best_b = 0.0, step = 0.0;
  for (int zoom = 0; zoom < 3; ++zoom) {
    const int n = 200;
    const double dm = (m_hi - m_lo) / n;
    const double db = (b_hi - b_lo) / n;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double m = m_lo + i * dm;
        const double b = b_lo + j * db;
        const double v = sse(m, b);
        if (v < best) {
          best = v;
          best_m = m;
          best_b = b;
        }
      }
    }
    m_lo = best_m - 2 * dm;
    m_hi = best_m + 2 * dm;
    b_lo = best_b - 2 * db;
    b_hi = best_b + 2 * db;
    step = std::max(dm, db);
  }
  return {best_m, best_b, step};
}

void criterion_5() {
  struct Instance {
    std::vector<double> xs, ys;
    double slope, intercept, r_squared, slope_se;  // closed-form expectations
  };
  const std::vector<Instance> instances = {
      // worked example: slope 1/2, intercept 1/2, R^2 1/4, SE sqrt(3)/2
      {{0, 1, 2}, {1, 0, 2}, 0.5, 0.5, 0.25, 0.8660254037844386},
      // exact line
      {{0, 1, 2}, {0, -1, -2}, -1.0, 0.0, 1.0, 0.0},
      // 4 points: hand-solved normal equations
      // x={0,1,2,3}, y={0,1,1,2}: slope 0.6, intercept 0.1
      {{0, 1, 2, 3}, {0, 1, 1, 2}, 0.6, 0.1, 0.9,
       std::sqrt(0.2 / (2.0 * 5.0))},
      // 5 symmetric points: slope Sxy/Sxx = -16/10
      {{-2, -1, 0, 1, 2}, {3, 2, 0, -2, -3}, -1.6, 0.0, 1.0 - 0.4 / 26.0,
       std::sqrt((0.4 / 3.0) / 10.0)},
  };

  bool pass = true;
  std::string detail;
  for (const auto& inst : instances) {
    const auto fit = ols(inst.xs, inst.ys);
    if (std::fabs(fit.slope - inst.slope) > 1e-10 ||
        std::fabs(fit.intercept - inst.intercept) > 1e-10 ||
        std::fabs(fit.r_squared - inst.r_squared) > 1e-10 ||
        std::fabs(fit.slope_std_err - inst.slope_se) > 1e-10) {
      pass = false;
      detail = "closed-form mismatch";
      break;
    }
    const auto grid = grid_least_squares(inst.xs, inst.ys);
    if (std::fabs(fit.slope - grid.slope) > grid.resolution ||
        std::fabs(fit.intercept - grid.intercept) > grid.resolution) {
      pass = false;
      detail = "grid-minimizer mismatch";
      break;
    }
  }
  report_line(5, pass,
              "ols exactness on hand instances vs closed form (1e-10) and "
              "brute-force grid" +
                  (detail.empty() ? std::string() : ": " + detail));
}

void criterion_6() {
  std::vector<FirmRecord> records = {
      {"hot", 1990, {}, 100.0, {}, {}},   {"hot", 1991, {}, 1500.0, {}, {}},
      {"edge", 1990, {}, 100.0, {}, {}},  {"edge", 1991, {}, 1100.0, {}, {}},
      {"calm", 1990, {}, 100.0, {}, {}},  {"calm", 1991, {}, 110.0, {}, {}},
  };
  const FirmPanel panel(std::move(records), "acceptance");
  const auto filtered =
      filter_outliers(extract_growth_observations(panel, Measure::kSales));
  bool removed_15 = true;
  bool kept_11 = false;
  for (const auto& o : filtered.observations) {
    if (o.firm_id == "hot") removed_15 = false;
    if (o.firm_id == "edge") kept_11 = true;
  }
  const bool logged = filtered.filter_log.outlier() == 1;
  report_line(6, removed_15 && kept_11 && logged,
              std::string("outlier rule: ratio 15 removed=") +
                  (removed_15 ? "yes" : "no") + " logged=" +
                  (logged ? "yes" : "no") + ", ratio 11 kept=" +
                  (kept_11 ? "yes" : "no") + " (strict boundary)");
}

void criterion_7() {
  const auto start = std::chrono::steady_clock::now();
  const std::map<int, long> schedule{{1980, 53}, {1991, 214}, {2004, 514}};
  int converged = 0;
  int ordered = 0;
  std::vector<double> first_ses, last_ses;
  const int n_seeds = 20;
  for (int s = 0; s < n_seeds; ++s) {
    SynthConfig cfg;
    cfg.n_firms = 514;
    cfg.n_years = 25;  // 1980..2004
    cfg.seed = 1000 + static_cast<std::uint64_t>(s);
    cfg.s_min = 1e2;
    cfg.s_max = 1e8;
    const auto panel = gen_emerging_industry(cfg, 0.25, 1.0, schedule);
    WindowOptions options;  // 5-year windows, 10 bins
    const auto series = moving_window_fits(panel, Measure::kSales, options);
    const auto convergence = detect_convergence(series, 0.1, 3);
    if (convergence.converged) ++converged;

    const WindowEntry* first_ok = nullptr;
    const WindowEntry* last_ok = nullptr;
    for (const auto& e : series.entries) {
      if (!e.fit) continue;
      if (first_ok == nullptr) first_ok = &e;
      last_ok = &e;
    }
    if (first_ok && last_ok) {
      first_ses.push_back(first_ok->fit->slope_std_err);
      last_ses.push_back(last_ok->fit->slope_std_err);
      if (first_ok->fit->slope_std_err > last_ok->fit->slope_std_err) {
        ++ordered;
      }
    }
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double med_first = median(first_ses);
  const double med_last = median(last_ses);
  const double elapsed = seconds_since(start);
  const bool pass = med_first > med_last && converged >= 16 && elapsed < 60.0;
  report_line(7, pass,
              "self-organization over " + std::to_string(n_seeds) +
                  " seeds: median first-window SE=" + fmt(med_first) +
                  " > median last-window SE=" + fmt(med_last) +
                  ", convergence fired " + std::to_string(converged) + "/" +
                  std::to_string(n_seeds) + " (>= 16), " + fmt(elapsed) +
                  "s (< 60s)");
}

void criterion_8() {
  const fs::path base = fs::temp_directory_path() / "firmscale_acceptance8";
  fs::remove_all(base);
  SynthSpec spec;
  spec.model = "laplace";
  spec.cfg = laplace_oracle_config();
  spec.cfg.n_firms = 5000;
  spec.beta = 0.25;
  spec.scale_a = 1.0;

  std::ostringstream sink;
  std::vector<std::string> panels, bins, fits, plots;
  for (int run = 0; run < 2; ++run) {
    const auto dir = base / ("run" + std::to_string(run));
    cmd_synth(spec, dir, sink);
    AnalysisRequest request;
    request.input = dir / "panel.tsv";
    request.n_bins = 20;
    request.out_dir = dir / "out";
    cmd_analyze(request, sink);
    panels.push_back(slurp(dir / "panel.tsv"));
    bins.push_back(slurp(dir / "out" / "bins.tsv"));
    fits.push_back(slurp(dir / "out" / "fit.tsv"));
    plots.push_back(slurp(dir / "out" / "plotdata.tsv"));
  }
  fs::remove_all(base);
  const bool pass = !panels[0].empty() && panels[0] == panels[1] &&
                    bins[0] == bins[1] && fits[0] == fits[1] &&
                    plots[0] == plots[1];
  report_line(8, pass,
              "determinism: repeated synth+analyze outputs byte-identical "
              "(panel, bins, fit, plotdata)");
}

void criterion_9() {
  SynthConfig cfg = laplace_oracle_config();
  cfg.n_firms = 3000;
  const auto panel = gen_power_law_laplace(cfg, 0.25, 1.0);
  const auto direct = extract_growth_observations(panel, Measure::kSales);

  std::stringstream buffer;
  write_panel(buffer, panel);
  const auto reloaded = load_panel(buffer, {}, "roundtrip");
  const auto via_file = extract_growth_observations(reloaded, Measure::kSales);

  bool pass = direct.observations.size() == via_file.observations.size();
  if (pass) {
    for (std::size_t i = 0; i < direct.observations.size(); ++i) {
      const auto& a = direct.observations[i];
      const auto& b = via_file.observations[i];
      if (a.firm_id != b.firm_id || a.year0 != b.year0 || a.s0 != b.s0 ||
          a.s1 != b.s1 || a.ratio != b.ratio ||
          a.log_growth != b.log_growth ||
          a.classification != b.classification) {
        pass = false;
        break;
      }
    }
  }
  report_line(9, pass,
              "round-trip fidelity: serialize -> load -> extract matches the "
              "in-memory observation set field-by-field (" +
                  std::to_string(direct.observations.size()) + " obs)");
}

void criterion_10(const PipelineResult& laplace_run) {
  const double beta = 0.25;
  const double a = 1.0;
  int checked = 0;
  bool pass = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < laplace_run.table.rows.size(); ++i) {
    const auto& row = laplace_run.table.rows[i];
    if (row.count < 500) continue;
    ++checked;
    const auto fit = fit_conditional_laplace(laplace_run.obs,
                                             laplace_run.table, i);
    const double expected = a * std::pow(row.center, -beta) / std::sqrt(2.0);
    const double rel = std::fabs(fit.scale - expected) / expected;
    worst = std::max(worst, rel);
    if (rel > 0.10) pass = false;
  }
  pass = pass && checked > 0;
  report_line(10, pass,
              "conditional Laplace scale within 10% of a*center^(-beta)/"
              "sqrt(2) in " + std::to_string(checked) +
                  " bins with >= 500 obs (worst " + fmt(100.0 * worst) + "%)");
}

}  // namespace

int main() {
  PipelineResult laplace_run;
  criterion_1(laplace_run);
  criterion_2();
  criterion_3();
  criterion_4(laplace_run);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(laplace_run);

  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
