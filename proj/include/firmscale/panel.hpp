#ifndef FIRMSCALE_PANEL_HPP
#define FIRMSCALE_PANEL_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "firmscale/classification.hpp"

namespace firmscale {

inline constexpr int kMinYear = 1950;
inline constexpr int kMaxYear = 2100;

enum class Measure { kSales, kEmployees, kAssets };

// Throws std::invalid_argument for anything but "sales", "employees", "assets".
Measure measure_from_string(std::string_view name);
std::string_view to_string(Measure measure);

struct FirmRecord {
  std::string firm_id;
  int year = 0;
  ClassificationCode classification;  // empty = unclassified
  std::optional<double> sales;        // absent means missing, never 0
  std::optional<double> employees;
  std::optional<double> assets;

  std::optional<double> measure(Measure m) const;
};

// Rejections recorded while ingesting a delimited file. Panels built
// directly in memory carry an empty log; filters return fresh panels
// with empty logs (the log describes one load event, not derived views).
struct IngestLog {
  long rows_seen = 0;  // data rows examined, excluding the header
  long malformed = 0;
  std::string first_malformed;              // "line N: <content>"
  std::vector<std::string> duplicate_keys;  // "firm_id@year (line N)"
  std::vector<std::string> negative_values; // "line N: field=value (firm_id@year)"

  long rejected() const {
    return malformed + static_cast<long>(duplicate_keys.size()) +
           static_cast<long>(negative_values.size());
  }
};

struct ValidationReport {
  long record_count = 0;   // accepted + rejected rows
  long accepted_count = 0;
  long firm_count = 0;
  std::optional<std::pair<int, int>> year_span;
  std::vector<std::string> duplicate_keys;
  std::vector<std::string> negative_values;
  long malformed_count = 0;
  std::string first_malformed;
  std::map<std::string, long> missing_measure_counts;
};

std::ostream& operator<<(std::ostream& out, const ValidationReport& report);

/// Immutable longitudinal firm table. Records are held sorted by
/// (firm_id, year) and (firm_id, year) is unique across the panel, so
/// iteration order is deterministic. All filters return new panels.
class FirmPanel {
 public:
  FirmPanel() = default;

  // Sorts the records; throws DataError on duplicate (firm_id, year),
  // a year outside [kMinYear, kMaxYear], or a negative size value.
  FirmPanel(std::vector<FirmRecord> records, std::string provenance,
            Measure size_measure_default = Measure::kSales);

  std::span<const FirmRecord> records() const { return records_; }
  const std::string& provenance() const { return provenance_; }
  Measure size_measure_default() const { return size_measure_default_; }
  const IngestLog& ingest_log() const { return ingest_; }

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  long firm_count() const;
  std::optional<std::pair<int, int>> year_span() const;

 private:
  std::vector<FirmRecord> records_;
  std::string provenance_;
  Measure size_measure_default_ = Measure::kSales;
  IngestLog ingest_;

  friend FirmPanel load_panel(std::istream&, const struct ColumnSchema&,
                              std::string);
};

// Maps logical field names onto the input file's column names.
struct ColumnSchema {
  std::string firm_id = "firm_id";
  std::string year = "year";
  std::string classification = "classification";
  std::string sales = "sales";
  std::string employees = "employees";
  std::string assets = "assets";
};

// Reads "logical=column" lines; '#' starts a comment. Unknown keys error.
ColumnSchema load_schema_file(const std::filesystem::path& path);

// Parses UTF-8 delimited text with a header row. The delimiter (tab or
// comma) is detected from the header line. firm_id and year columns are
// mandatory. Absent numeric cells are "" or "NA". Malformed rows are
// rejected and counted; more than 50% malformed is a DataError naming
// the first offending line. Duplicate (firm_id, year): first occurrence
// wins, later ones are logged. Negative size values reject the row.
FirmPanel load_panel(std::istream& in, const ColumnSchema& schema = {},
                     std::string provenance = "stream");
FirmPanel load_panel_file(const std::filesystem::path& path,
                          const ColumnSchema& schema = {});

// Tab-separated, header firm_id/year/classification/sales/employees/assets.
// Doubles are written in shortest round-trip form, so load_panel recovers
// them bit-exactly. Absent values are empty cells.
void write_panel(std::ostream& out, const FirmPanel& panel);
void write_panel_file(const std::filesystem::path& path, const FirmPanel& panel);

ValidationReport validate_panel(const FirmPanel& panel);

// Keeps records whose classification starts with prefix. prefix must be
// a valid non-empty code. Empty result is a valid panel, not an error.
FirmPanel filter_classification(const FirmPanel& panel,
                                const ClassificationCode& prefix);

// Keeps records with start <= year <= end. Throws std::invalid_argument
// when start > end.
FirmPanel filter_years(const FirmPanel& panel, int start, int end);

}  // namespace firmscale

#endif
