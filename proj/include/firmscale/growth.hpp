#ifndef FIRMSCALE_GROWTH_HPP
#define FIRMSCALE_GROWTH_HPP

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "firmscale/panel.hpp"

namespace firmscale {

// One consecutive-year size pair. ratio = s1/s0 and log_growth = ln(ratio)
// exactly as computed from the stored sizes.
struct GrowthObservation {
  std::string firm_id;
  int year0 = 0;  // year of s0; s1 is the size in year0 + 1
  double s0 = 0.0;
  double s1 = 0.0;
  double ratio = 0.0;
  double log_growth = 0.0;
  ClassificationCode classification;  // taken from the year0 record
};

enum class ExclusionReason : int {
  kMissing = 0,      // no record at year0+1, or the measure absent
  kNonpositive = 1,  // size present but <= 0
  kOutlier = 2,      // removed by the growth-percentage rule
};

// Exclusion counts keyed by the candidate pair's initial year, so pooling
// a year window can subset the log and keep the accounting identity
// candidates examined == |observations| + excluded.
class FilterLog {
 public:
  void add(int year0, ExclusionReason reason, long n = 1);

  long missing() const { return total(ExclusionReason::kMissing); }
  long nonpositive() const { return total(ExclusionReason::kNonpositive); }
  long outlier() const { return total(ExclusionReason::kOutlier); }
  long total() const;
  long total(ExclusionReason reason) const;

  FilterLog window(int start_year, int end_year) const;

  friend bool operator==(const FilterLog&, const FilterLog&) = default;

 private:
  std::map<int, std::array<long, 3>> by_year_;
};

struct ObservationSet {
  std::vector<GrowthObservation> observations;
  Measure measure = Measure::kSales;
  FilterLog filter_log;

  long candidates_examined() const {
    return static_cast<long>(observations.size()) + filter_log.total();
  }
};

// One observation per firm per consecutive-year record pair where the
// selected measure is present and strictly positive at both ends. A record
// pair spanning a gap produces nothing; the skipped (year, year+1)
// candidates are logged as missing.
ObservationSet extract_growth_observations(const FirmPanel& panel,
                                           Measure measure);
ObservationSet extract_growth_observations(const FirmPanel& panel);

// Removes observations whose percentage growth exceeds max_growth_pct,
// i.e. (ratio - 1) > max_growth_pct / 100, strictly. Shrinking firms are
// never removed. Throws std::invalid_argument unless max_growth_pct > 0.
ObservationSet filter_outliers(const ObservationSet& obs,
                               double max_growth_pct = 1000.0);

// Keeps observations with year0 in [start_year, end_year] inclusive; a
// window labelled [y, y+4] therefore consumes size data up to year y+5.
ObservationSet pool(const ObservationSet& obs, int start_year, int end_year);

// Audit serialization: firm_id, year0, s0, s1, ratio, log_growth,
// classification; tab-separated, shortest round-trip doubles.
void write_observations(std::ostream& out, const ObservationSet& obs);

}  // namespace firmscale

#endif
