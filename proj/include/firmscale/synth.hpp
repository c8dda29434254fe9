#ifndef FIRMSCALE_SYNTH_HPP
#define FIRMSCALE_SYNTH_HPP

#include <cstdint>
#include <map>
#include <string>

#include "firmscale/panel.hpp"

namespace firmscale {

// Shared knobs for the synthetic generators. Initial sizes are drawn
// log-uniform on [s_min, s_max]; firm i uses the substream
// firm_stream(seed, i), so output is identical however firms are scheduled.
struct SynthConfig {
  long n_firms = 1000;
  int n_years = 2;
  std::uint64_t seed = 0;
  double s_min = 1.0;
  double s_max = 1e6;
  int start_year = 1980;
  std::string classification = "9999";

  // Throws std::invalid_argument on violation of any field constraint.
  void validate() const;
};

// Multiplicative growth with size-independent noise: S' = S * exp(eps),
// eps ~ Normal(0, sigma_eps^2). Conditional sigma is flat, so the fitted
// scaling exponent is 0.
FirmPanel gen_gibrat(const SynthConfig& cfg, double sigma_eps);

// A firm is K unit parts of size 1 (K log-uniform on [s_min, s_max],
// rounded to an integer >= 1; recorded size starts at exactly K). Each
// year the growth factor is the mean of K unit shocks 1 + eta,
// eta ~ Normal(0, unit_sigma^2) truncated to keep every unit positive;
// the decomposition resets to K units every year, so K is stationary and
// central-limit scaling gives sigma(ln R) = unit_sigma * K^(-1/2):
// exponent 1/2. unit_sigma must lie in (0, 0.5].
FirmPanel gen_units(const SynthConfig& cfg, double unit_sigma);

// Imposes sigma(S0) = a * S0^(-beta) by construction: each year the log
// growth is Laplace(0, sigma(S)/sqrt(2)), whose standard deviation is
// exactly sigma(S), and the rule is re-applied to the evolved size.
// beta must lie in [0, 1], a > 0. When beta > 0 evolved sizes are floored
// at s_min / 10: below that the size-dependent noise amplitude blows up
// and the walk diverges in finite time.
FirmPanel gen_power_law_laplace(const SynthConfig& cfg, double beta, double a);

// Same growth law, but firm i exists only from its entry year onward.
// entry_schedule maps year -> cumulative firm count; between scheduled
// years the count is interpolated linearly, before the first knot it
// holds at the first count, after the last knot at the final count.
// Keys below kMinYear are offsets from cfg.start_year. The schedule must
// be non-decreasing and its final count must not exceed cfg.n_firms.
FirmPanel gen_emerging_industry(const SynthConfig& cfg, double beta, double a,
                                const std::map<int, long>& entry_schedule);

}  // namespace firmscale

#endif
