#include "firmscale/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "firmscale/rng.hpp"

namespace firmscale {

namespace {

std::string firm_id_for(long index) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "F%07ld", index);
  return buf;
}

std::string describe(const SynthConfig& cfg) {
  return "firms=" + std::to_string(cfg.n_firms) +
         " years=" + std::to_string(cfg.n_years) +
         " seed=" + std::to_string(cfg.seed);
}

}  // namespace

void SynthConfig::validate() const {
  if (n_firms < 1) throw std::invalid_argument("n_firms must be >= 1");
  if (n_years < 2) throw std::invalid_argument("n_years must be >= 2");
  if (!(s_min > 0.0) || !(s_min < s_max)) {
    throw std::invalid_argument("size range requires 0 < s_min < s_max");
  }
  if (start_year < kMinYear || start_year + n_years - 1 > kMaxYear) {
    throw std::invalid_argument("panel years fall outside [" +
                                std::to_string(kMinYear) + ", " +
                                std::to_string(kMaxYear) + "]");
  }
  if (!ClassificationCode::parse(classification)) {
    throw std::invalid_argument("invalid classification code '" +
                                classification + "'");
  }
}

FirmPanel gen_gibrat(const SynthConfig& cfg, double sigma_eps) {
  cfg.validate();
  if (!(sigma_eps > 0.0)) {
    throw std::invalid_argument("sigma_eps must be positive");
  }
  const ClassificationCode code(cfg.classification);
  std::vector<FirmRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.n_firms) * cfg.n_years);
  for (long i = 0; i < cfg.n_firms; ++i) {
    auto rng = firm_stream(cfg.seed, static_cast<std::uint64_t>(i));
    double size = rng.log_uniform(cfg.s_min, cfg.s_max);
    const std::string id = firm_id_for(i);
    for (int t = 0; t < cfg.n_years; ++t) {
      records.push_back({id, cfg.start_year + t, code, size, {}, {}});
      if (t + 1 < cfg.n_years) size *= std::exp(rng.normal(0.0, sigma_eps));
    }
  }
  return FirmPanel(std::move(records),
                   "synth:gibrat sigma_eps=" + std::to_string(sigma_eps) +
                       " " + describe(cfg));
}

FirmPanel gen_units(const SynthConfig& cfg, double unit_sigma) {
  cfg.validate();
  if (!(unit_sigma > 0.0) || unit_sigma > 0.5) {
    throw std::invalid_argument("unit_sigma must lie in (0, 0.5]");
  }
  const ClassificationCode code(cfg.classification);
  std::vector<FirmRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.n_firms) * cfg.n_years);
  for (long i = 0; i < cfg.n_firms; ++i) {
    auto rng = firm_stream(cfg.seed, static_cast<std::uint64_t>(i));
    const long units = std::max<long>(
        1, std::llround(rng.log_uniform(cfg.s_min, cfg.s_max)));
    const std::string id = firm_id_for(i);
    double size = static_cast<double>(units);
    for (int t = 0; t < cfg.n_years; ++t) {
      records.push_back({id, cfg.start_year + t, code, size, {}, {}});
      if (t + 1 < cfg.n_years) {
        // growth factor is the mean of K positive unit shocks; the unit
        // decomposition resets to K every year, so the noise never
        // compounds with realized size
        double aggregate = 0.0;
        for (long u = 0; u < units; ++u) {
          double part;
          do {
            part = 1.0 + rng.normal(0.0, unit_sigma);
          } while (part <= 0.0);
          aggregate += part;
        }
        size *= aggregate / static_cast<double>(units);
      }
    }
  }
  return FirmPanel(std::move(records),
                   "synth:units unit_sigma=" + std::to_string(unit_sigma) +
                       " " + describe(cfg));
}

FirmPanel gen_power_law_laplace(const SynthConfig& cfg, double beta,
                                double a) {
  cfg.validate();
  if (beta < 0.0 || beta > 1.0) {
    throw std::invalid_argument("beta must lie in [0, 1]");
  }
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  const ClassificationCode code(cfg.classification);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // For beta > 0 the noise amplitude grows without bound as the size
  // shrinks, so a free walk diverges in finite time. Evolved sizes are
  // floored one decade below the configured range, where no oracle bins.
  const double size_floor = beta > 0.0 ? cfg.s_min * 0.1 : 0.0;
  std::vector<FirmRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.n_firms) * cfg.n_years);
  for (long i = 0; i < cfg.n_firms; ++i) {
    auto rng = firm_stream(cfg.seed, static_cast<std::uint64_t>(i));
    double size = rng.log_uniform(cfg.s_min, cfg.s_max);
    const std::string id = firm_id_for(i);
    for (int t = 0; t < cfg.n_years; ++t) {
      records.push_back({id, cfg.start_year + t, code, size, {}, {}});
      if (t + 1 < cfg.n_years) {
        // sd of Laplace(0, b) is b*sqrt(2); b = sigma/sqrt(2) makes the
        // log-growth standard deviation exactly a * size^(-beta)
        const double sigma = a * std::pow(size, -beta);
        size = std::max(size * std::exp(rng.laplace(0.0, sigma * inv_sqrt2)),
                        size_floor);
      }
    }
  }
  return FirmPanel(std::move(records),
                   "synth:laplace beta=" + std::to_string(beta) +
                       " a=" + std::to_string(a) + " " + describe(cfg));
}

FirmPanel gen_emerging_industry(const SynthConfig& cfg, double beta, double a,
                                const std::map<int, long>& entry_schedule) {
  cfg.validate();
  if (beta < 0.0 || beta > 1.0) {
    throw std::invalid_argument("beta must lie in [0, 1]");
  }
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  if (entry_schedule.empty()) {
    throw std::invalid_argument("entry schedule must not be empty");
  }

  // normalize knots to absolute years; keys below kMinYear are offsets
  std::vector<std::pair<int, long>> knots;
  for (const auto& [year, count] : entry_schedule) {
    const int abs_year = year < kMinYear ? cfg.start_year + year : year;
    if (count < 0) throw std::invalid_argument("schedule count must be >= 0");
    knots.emplace_back(abs_year, count);
  }
  std::sort(knots.begin(), knots.end());
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (knots[k].first == knots[k - 1].first) {
      throw std::invalid_argument("schedule repeats year " +
                                  std::to_string(knots[k].first));
    }
    if (knots[k].second < knots[k - 1].second) {
      throw std::invalid_argument("entry schedule must be non-decreasing");
    }
  }
  if (knots.back().second > cfg.n_firms) {
    throw std::invalid_argument("schedule final count " +
                                std::to_string(knots.back().second) +
                                " exceeds n_firms " +
                                std::to_string(cfg.n_firms));
  }

  auto cumulative = [&](int year) -> long {
    if (year <= knots.front().first) return knots.front().second;
    if (year >= knots.back().first) return knots.back().second;
    for (std::size_t k = 1; k < knots.size(); ++k) {
      if (year <= knots[k].first) {
        const auto [y0, c0] = knots[k - 1];
        const auto [y1, c1] = knots[k];
        const double f = static_cast<double>(year - y0) / (y1 - y0);
        return c0 + std::lround(f * static_cast<double>(c1 - c0));
      }
    }
    return knots.back().second;
  };

  const int last_year = cfg.start_year + cfg.n_years - 1;
  const ClassificationCode code(cfg.classification);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double size_floor = beta > 0.0 ? cfg.s_min * 0.1 : 0.0;
  std::vector<FirmRecord> records;
  for (long i = 0; i < cfg.n_firms; ++i) {
    // firm i enters in the first panel year whose cumulative count covers it
    int entry = -1;
    for (int y = cfg.start_year; y <= last_year; ++y) {
      if (cumulative(y) >= i + 1) {
        entry = y;
        break;
      }
    }
    if (entry < 0) continue;  // beyond the schedule's final count

    auto rng = firm_stream(cfg.seed, static_cast<std::uint64_t>(i));
    double size = rng.log_uniform(cfg.s_min, cfg.s_max);
    const std::string id = firm_id_for(i);
    for (int y = entry; y <= last_year; ++y) {
      records.push_back({id, y, code, size, {}, {}});
      if (y < last_year) {
        const double sigma = a * std::pow(size, -beta);
        size = std::max(size * std::exp(rng.laplace(0.0, sigma * inv_sqrt2)),
                        size_floor);
      }
    }
  }
  return FirmPanel(std::move(records),
                   "synth:emerging beta=" + std::to_string(beta) +
                       " a=" + std::to_string(a) + " " + describe(cfg));
}

}  // namespace firmscale
