#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace mtq {

// One long-format row. index is a queue length k or a measure name such as "outflow".
struct Record {
  double time = 0.0;
  std::string index;
  double value = 0.0;
  std::string method;
  std::string scenario;

  bool operator==(const Record&) const = default;
};

class ResultTable {
 public:
  // Throws ConfigError on a second record for the same (scenario, time, index, method).
  void add(Record r);
  void add(double time, std::string index, double value, const std::string& method,
           const std::string& scenario) {
    add(Record{time, std::move(index), value, method, scenario});
  }
  void append(const ResultTable& other);

  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Values of one (method, index) series in insertion order.
  std::vector<Record> series(const std::string& method, const std::string& index) const;

  // Free-form provenance (seed, generator id) written to a sidecar by emit_csv.
  std::map<std::string, std::string> metadata;

 private:
  std::vector<Record> records_;
  std::set<std::tuple<std::string, double, std::string, std::string>> keys_;
};

inline constexpr const char* kCsvHeader = "time,index,value,method,scenario";

std::string to_csv(const ResultTable& table);
ResultTable parse_csv(const std::string& text);

// Written to a temporary file and renamed into place. Metadata, if any, goes to
// "<path>.meta" as key=value lines.
void emit_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable read_csv(const std::filesystem::path& path);

// Two-column "time value" blocks, one per (scenario, method, index), each headed by a
// comment line and separated by two blank lines.
std::string to_plot_data(const ResultTable& table);
void emit_plot_data(const ResultTable& table, const std::filesystem::path& path);

}  // namespace mtq
