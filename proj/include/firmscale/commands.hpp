#ifndef FIRMSCALE_COMMANDS_HPP
#define FIRMSCALE_COMMANDS_HPP

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "firmscale/panel.hpp"
#include "firmscale/report.hpp"
#include "firmscale/synth.hpp"
#include "firmscale/window.hpp"

namespace firmscale {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitFit = 3;

struct SynthSpec {
  std::string model;  // gibrat | units | laplace | emerging
  SynthConfig cfg;
  double sigma_eps = 0.2;
  double unit_sigma = 0.2;
  double beta = 0.25;
  double scale_a = 1.0;
  std::map<int, long> schedule;  // emerging only
};

// Runs the named generator; throws std::invalid_argument on unknown model
// or bad parameters.
FirmPanel run_generator(const SynthSpec& spec);

struct AnalysisRequest {
  std::optional<std::filesystem::path> input;
  std::optional<SynthSpec> synth;  // exactly one of input/synth
  ColumnSchema schema;
  Measure measure = Measure::kSales;
  std::optional<ClassificationCode> prefix;
  std::optional<std::pair<int, int>> years;
  int n_bins = 20;
  long min_count = 5;
  double max_growth_pct = 1000.0;
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::kTsv;
  std::string name;  // label for report rows; composed from filters if empty
  bool dump_observations = false;  // also write the audit observation table
};

struct WindowParams {
  int window_length = 5;
  double se_threshold = 0.1;
  int persistence = 3;
};

// Each command throws on failure (std::invalid_argument for bad requests,
// DataError / FitError from the pipeline) and writes its artifacts under
// request.out_dir. run_cli_command maps exceptions onto the exit-code
// contract: 0 ok, 1 usage, 2 data, 3 fit.
void cmd_validate(const AnalysisRequest& request, std::ostream& out);
void cmd_analyze(const AnalysisRequest& request, std::ostream& out);
void cmd_window(const AnalysisRequest& request, const WindowParams& params,
                std::ostream& out);
void cmd_synth(const SynthSpec& spec, const std::filesystem::path& out_dir,
               std::ostream& out);
void cmd_report(const AnalysisRequest& request,
                const std::vector<std::pair<std::string, std::string>>& sectors,
                std::ostream& out);

int run_cli_command(const std::function<void()>& fn, std::ostream& err);

}  // namespace firmscale

#endif
