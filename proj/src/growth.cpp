#include "firmscale/growth.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "firmscale/report.hpp"

namespace firmscale {

void FilterLog::add(int year0, ExclusionReason reason, long n) {
  by_year_[year0][static_cast<int>(reason)] += n;
}

long FilterLog::total() const {
  long sum = 0;
  for (const auto& [year, counts] : by_year_) {
    sum += counts[0] + counts[1] + counts[2];
  }
  return sum;
}

long FilterLog::total(ExclusionReason reason) const {
  long sum = 0;
  for (const auto& [year, counts] : by_year_) {
    sum += counts[static_cast<int>(reason)];
  }
  return sum;
}

FilterLog FilterLog::window(int start_year, int end_year) const {
  FilterLog out;
  for (const auto& [year, counts] : by_year_) {
    if (year < start_year || year > end_year) continue;
    out.by_year_[year] = counts;
  }
  return out;
}

ObservationSet extract_growth_observations(const FirmPanel& panel,
                                           Measure measure) {
  ObservationSet out;
  out.measure = measure;

  const auto records = panel.records();
  std::size_t i = 0;
  while (i < records.size()) {
    // records are sorted by (firm_id, year); walk one firm's run
    std::size_t j = i;
    while (j + 1 < records.size() &&
           records[j + 1].firm_id == records[i].firm_id) {
      ++j;
    }
    // every record but the firm's last opens a candidate pair (y, y+1)
    for (std::size_t k = i; k < j; ++k) {
      const auto& first = records[k];
      const auto& second = records[k + 1];
      if (second.year != first.year + 1) {
        out.filter_log.add(first.year, ExclusionReason::kMissing);
        continue;
      }
      const auto v0 = first.measure(measure);
      const auto v1 = second.measure(measure);
      if (!v0 || !v1) {
        out.filter_log.add(first.year, ExclusionReason::kMissing);
        continue;
      }
      if (*v0 <= 0.0 || *v1 <= 0.0) {
        out.filter_log.add(first.year, ExclusionReason::kNonpositive);
        continue;
      }
      GrowthObservation obs;
      obs.firm_id = first.firm_id;
      obs.year0 = first.year;
      obs.s0 = *v0;
      obs.s1 = *v1;
      obs.ratio = *v1 / *v0;
      obs.log_growth = std::log(obs.ratio);
      obs.classification = first.classification;
      out.observations.push_back(std::move(obs));
    }
    i = j + 1;
  }
  return out;
}

ObservationSet extract_growth_observations(const FirmPanel& panel) {
  return extract_growth_observations(panel, panel.size_measure_default());
}

ObservationSet filter_outliers(const ObservationSet& obs,
                               double max_growth_pct) {
  if (!(max_growth_pct > 0.0)) {
    throw std::invalid_argument("max_growth_pct must be positive");
  }
  const double max_change = max_growth_pct / 100.0;
  ObservationSet out;
  out.measure = obs.measure;
  out.filter_log = obs.filter_log;
  out.observations.reserve(obs.observations.size());
  for (const auto& o : obs.observations) {
    if (o.ratio - 1.0 > max_change) {
      out.filter_log.add(o.year0, ExclusionReason::kOutlier);
    } else {
      out.observations.push_back(o);
    }
  }
  return out;
}

ObservationSet pool(const ObservationSet& obs, int start_year, int end_year) {
  if (start_year > end_year) {
    throw std::invalid_argument("pool window start " +
                                std::to_string(start_year) + " exceeds end " +
                                std::to_string(end_year));
  }
  ObservationSet out;
  out.measure = obs.measure;
  out.filter_log = obs.filter_log.window(start_year, end_year);
  for (const auto& o : obs.observations) {
    if (o.year0 >= start_year && o.year0 <= end_year) {
      out.observations.push_back(o);
    }
  }
  return out;
}

void write_observations(std::ostream& out, const ObservationSet& obs) {
  out << "firm_id\tyear0\ts0\ts1\tratio\tlog_growth\tclassification\n";
  for (const auto& o : obs.observations) {
    out << o.firm_id << '\t' << o.year0 << '\t' << format_double(o.s0) << '\t'
        << format_double(o.s1) << '\t' << format_double(o.ratio) << '\t'
        << format_double(o.log_growth) << '\t' << o.classification.digits()
        << '\n';
  }
}

}  // namespace firmscale
