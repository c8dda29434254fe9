#include "firmscale/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "firmscale/errors.hpp"
#include "firmscale/report.hpp"

namespace firmscale {

Measure measure_from_string(std::string_view name) {
  if (name == "sales") return Measure::kSales;
  if (name == "employees") return Measure::kEmployees;
  if (name == "assets") return Measure::kAssets;
  throw std::invalid_argument("unknown size measure '" + std::string(name) +
                              "' (expected sales, employees or assets)");
}

std::string_view to_string(Measure measure) {
  switch (measure) {
    case Measure::kSales: return "sales";
    case Measure::kEmployees: return "employees";
    case Measure::kAssets: return "assets";
  }
  return "sales";
}

std::optional<double> FirmRecord::measure(Measure m) const {
  switch (m) {
    case Measure::kSales: return sales;
    case Measure::kEmployees: return employees;
    case Measure::kAssets: return assets;
  }
  return std::nullopt;
}

namespace {

bool record_key_less(const FirmRecord& a, const FirmRecord& b) {
  if (a.firm_id != b.firm_id) return a.firm_id < b.firm_id;
  return a.year < b.year;
}

void check_record(const FirmRecord& rec) {
  if (rec.firm_id.empty()) throw DataError("record with empty firm_id");
  if (rec.year < kMinYear || rec.year > kMaxYear) {
    throw DataError("record year " + std::to_string(rec.year) +
                    " outside [" + std::to_string(kMinYear) + ", " +
                    std::to_string(kMaxYear) + "]");
  }
  for (auto m : {Measure::kSales, Measure::kEmployees, Measure::kAssets}) {
    const auto v = rec.measure(m);
    if (v && (!std::isfinite(*v) || *v < 0.0)) {
      throw DataError("record " + rec.firm_id + "@" +
                      std::to_string(rec.year) + " has invalid " +
                      std::string(to_string(m)));
    }
  }
}

}  // namespace

FirmPanel::FirmPanel(std::vector<FirmRecord> records, std::string provenance,
                     Measure size_measure_default)
    : records_(std::move(records)),
      provenance_(std::move(provenance)),
      size_measure_default_(size_measure_default) {
  for (const auto& rec : records_) check_record(rec);
  std::sort(records_.begin(), records_.end(), record_key_less);
  const auto dup = std::adjacent_find(
      records_.begin(), records_.end(), [](const auto& a, const auto& b) {
        return a.firm_id == b.firm_id && a.year == b.year;
      });
  if (dup != records_.end()) {
    throw DataError("duplicate (firm_id, year): " + dup->firm_id + "@" +
                    std::to_string(dup->year));
  }
}

long FirmPanel::firm_count() const {
  long count = 0;
  const std::string* prev = nullptr;
  for (const auto& rec : records_) {
    if (prev == nullptr || rec.firm_id != *prev) ++count;
    prev = &rec.firm_id;
  }
  return count;
}

std::optional<std::pair<int, int>> FirmPanel::year_span() const {
  if (records_.empty()) return std::nullopt;
  int lo = records_.front().year;
  int hi = lo;
  for (const auto& rec : records_) {
    lo = std::min(lo, rec.year);
    hi = std::max(hi, rec.year);
  }
  return std::make_pair(lo, hi);
}

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

bool cell_absent(const std::string& cell) {
  return cell.empty() || cell == "NA";
}

std::optional<int> parse_int(const std::string& cell) {
  int value = 0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::optional<double> parse_double(const std::string& cell) {
  double value = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

// Column positions resolved against a header; -1 = column not present.
struct ColumnIndex {
  int firm_id = -1;
  int year = -1;
  int classification = -1;
  int sales = -1;
  int employees = -1;
  int assets = -1;
};

int find_column(const std::vector<std::string>& header,
                const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

ColumnSchema load_schema_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file: " + path.string());
  ColumnSchema schema;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw DataError("schema file " + path.string() + " line " +
                      std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    if (key == "firm_id") schema.firm_id = value;
    else if (key == "year") schema.year = value;
    else if (key == "classification") schema.classification = value;
    else if (key == "sales") schema.sales = value;
    else if (key == "employees") schema.employees = value;
    else if (key == "assets") schema.assets = value;
    else {
      throw DataError("schema file " + path.string() + ": unknown field '" +
                      key + "'");
    }
  }
  return schema;
}

FirmPanel load_panel(std::istream& in, const ColumnSchema& schema,
                     std::string provenance) {
  if (!in) throw DataError("unreadable input stream: " + provenance);

  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw DataError("missing header row: " + provenance);
  }
  const char delim = header_line.find('\t') != std::string::npos ? '\t' : ',';
  const auto header = split(header_line, delim);

  ColumnIndex cols;
  cols.firm_id = find_column(header, schema.firm_id);
  cols.year = find_column(header, schema.year);
  cols.classification = find_column(header, schema.classification);
  cols.sales = find_column(header, schema.sales);
  cols.employees = find_column(header, schema.employees);
  cols.assets = find_column(header, schema.assets);
  if (cols.firm_id < 0) {
    throw DataError("missing mandatory column '" + schema.firm_id + "' in " +
                    provenance);
  }
  if (cols.year < 0) {
    throw DataError("missing mandatory column '" + schema.year + "' in " +
                    provenance);
  }

  FirmPanel panel;
  panel.provenance_ = std::move(provenance);
  IngestLog& log = panel.ingest_;
  std::set<std::pair<std::string, int>> seen;
  std::string line;
  long line_no = 1;  // header was line 1

  auto reject_malformed = [&](const std::string& content) {
    ++log.malformed;
    if (log.first_malformed.empty()) {
      log.first_malformed = "line " + std::to_string(line_no) + ": " + content;
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++log.rows_seen;
    const auto fields = split(line, delim);
    if (fields.size() != header.size()) {
      reject_malformed(line);
      continue;
    }

    FirmRecord rec;
    rec.firm_id = fields[cols.firm_id];
    if (rec.firm_id.empty() || cell_absent(rec.firm_id)) {
      reject_malformed(line);
      continue;
    }
    const auto year = parse_int(fields[cols.year]);
    if (!year || *year < kMinYear || *year > kMaxYear) {
      reject_malformed(line);
      continue;
    }
    rec.year = *year;

    if (cols.classification >= 0 &&
        !cell_absent(fields[cols.classification])) {
      auto code = ClassificationCode::parse(fields[cols.classification]);
      if (!code) {
        reject_malformed(line);
        continue;
      }
      rec.classification = std::move(*code);
    }

    bool malformed = false;
    std::string negative_field;
    double negative_value = 0.0;
    auto read_measure = [&](int col, std::optional<double>& slot,
                            const char* name) {
      if (malformed || col < 0 || cell_absent(fields[col])) return;
      const auto v = parse_double(fields[col]);
      if (!v) {
        malformed = true;
        return;
      }
      if (*v < 0.0) {
        if (negative_field.empty()) {
          negative_field = name;
          negative_value = *v;
        }
        return;
      }
      slot = *v;
    };
    read_measure(cols.sales, rec.sales, "sales");
    read_measure(cols.employees, rec.employees, "employees");
    read_measure(cols.assets, rec.assets, "assets");
    if (malformed) {
      reject_malformed(line);
      continue;
    }
    if (!negative_field.empty()) {
      log.negative_values.push_back(
          "line " + std::to_string(line_no) + ": " + negative_field + "=" +
          format_double(negative_value) + " (" + rec.firm_id + "@" +
          std::to_string(rec.year) + ")");
      continue;
    }

    const auto key = std::make_pair(rec.firm_id, rec.year);
    if (!seen.insert(key).second) {
      log.duplicate_keys.push_back(rec.firm_id + "@" +
                                   std::to_string(rec.year) + " (line " +
                                   std::to_string(line_no) + ")");
      continue;
    }
    panel.records_.push_back(std::move(rec));
  }

  if (log.rows_seen > 0 && 2 * log.malformed > log.rows_seen) {
    throw DataError("more than 50% of rows malformed in " +
                    panel.provenance_ + "; first offending " +
                    log.first_malformed);
  }

  std::sort(panel.records_.begin(), panel.records_.end(), record_key_less);
  return panel;
}

FirmPanel load_panel_file(const std::filesystem::path& path,
                          const ColumnSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open panel file: " + path.string());
  return load_panel(in, schema, path.string());
}

void write_panel(std::ostream& out, const FirmPanel& panel) {
  out << "firm_id\tyear\tclassification\tsales\temployees\tassets\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& rec : panel.records()) {
    out << rec.firm_id << '\t' << rec.year << '\t'
        << rec.classification.digits() << '\t' << cell(rec.sales) << '\t'
        << cell(rec.employees) << '\t' << cell(rec.assets) << '\n';
  }
}

void write_panel_file(const std::filesystem::path& path,
                      const FirmPanel& panel) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path.string());
  write_panel(out, panel);
}

ValidationReport validate_panel(const FirmPanel& panel) {
  ValidationReport report;
  const auto& log = panel.ingest_log();
  report.accepted_count = static_cast<long>(panel.size());
  report.record_count = report.accepted_count + log.rejected();
  report.firm_count = panel.firm_count();
  report.year_span = panel.year_span();
  report.duplicate_keys = log.duplicate_keys;
  report.negative_values = log.negative_values;
  report.malformed_count = log.malformed;
  report.first_malformed = log.first_malformed;
  for (auto m : {Measure::kSales, Measure::kEmployees, Measure::kAssets}) {
    long missing = 0;
    for (const auto& rec : panel.records()) {
      if (!rec.measure(m)) ++missing;
    }
    report.missing_measure_counts[std::string(to_string(m))] = missing;
  }
  return report;
}

std::ostream& operator<<(std::ostream& out, const ValidationReport& report) {
  out << "records: " << report.record_count << " (accepted "
      << report.accepted_count << ", malformed " << report.malformed_count
      << ", duplicate " << report.duplicate_keys.size() << ", negative "
      << report.negative_values.size() << ")\n";
  out << "firms: " << report.firm_count << "\n";
  if (report.year_span) {
    out << "years: " << report.year_span->first << "-"
        << report.year_span->second << "\n";
  } else {
    out << "years: none\n";
  }
  for (const auto& [name, count] : report.missing_measure_counts) {
    out << "missing " << name << ": " << count << "\n";
  }
  if (!report.first_malformed.empty()) {
    out << "first malformed " << report.first_malformed << "\n";
  }
  for (const auto& key : report.duplicate_keys) {
    out << "duplicate " << key << "\n";
  }
  for (const auto& entry : report.negative_values) {
    out << "negative " << entry << "\n";
  }
  return out;
}

FirmPanel filter_classification(const FirmPanel& panel,
                                const ClassificationCode& prefix) {
  if (prefix.empty()) {
    throw std::invalid_argument("classification prefix must be non-empty");
  }
  std::vector<FirmRecord> kept;
  for (const auto& rec : panel.records()) {
    if (rec.classification.matched_by(prefix)) kept.push_back(rec);
  }
  return FirmPanel(std::move(kept),
                   panel.provenance() + "|prefix=" + prefix.digits(),
                   panel.size_measure_default());
}

FirmPanel filter_years(const FirmPanel& panel, int start, int end) {
  if (start > end) {
    throw std::invalid_argument("year range start " + std::to_string(start) +
                                " exceeds end " + std::to_string(end));
  }
  std::vector<FirmRecord> kept;
  for (const auto& rec : panel.records()) {
    if (rec.year >= start && rec.year <= end) kept.push_back(rec);
  }
  return FirmPanel(std::move(kept),
                   panel.provenance() + "|years=" + std::to_string(start) +
                       ":" + std::to_string(end),
                   panel.size_measure_default());
}

}  // namespace firmscale
