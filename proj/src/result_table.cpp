#include "mtq/result_table.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>
#include <thread>

#include "mtq/errors.hpp"

namespace mtq {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_row(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw IoError("csv line " + std::to_string(line_no) + ": unterminated quote");
  return fields;
}

double parse_number(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw IoError("csv line " + std::to_string(line_no) + ": '" + s + "' is not a number");
  }
  return v;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::ostringstream suffix;
  suffix << ".tmp." << std::random_device{}() << std::hash<std::thread::id>{}(std::this_thread::get_id());
  auto tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into '" + path.string() + "'");
  }
}

}  // namespace

void ResultTable::add(Record r) {
  if (!keys_.emplace(r.scenario, r.time, r.index, r.method).second) {
    throw ConfigError("duplicate record for method '" + r.method + "', index '" + r.index + "' at t=" +
                      format_number(r.time));
  }
  records_.push_back(std::move(r));
}

void ResultTable::append(const ResultTable& other) {
  for (const auto& r : other.records_) add(r);
  for (const auto& [k, v] : other.metadata) metadata[k] = v;
}

std::vector<Record> ResultTable::series(const std::string& method, const std::string& index) const {
  std::vector<Record> out;
  for (const auto& r : records_) {
    if (r.method == method && r.index == index) out.push_back(r);
  }
  return out;
}

std::string to_csv(const ResultTable& table) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : table.records()) {
    out += format_number(r.time);
    out += ',';
    out += quote(r.index);
    out += ',';
    out += format_number(r.value);
    out += ',';
    out += quote(r.method);
    out += ',';
    out += quote(r.scenario);
    out += '\n';
  }
  return out;
}

ResultTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IoError(std::string("csv: expected header '") + kCsvHeader + "'");
  }
  ResultTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_row(line, line_no);
    if (f.size() != 5) throw IoError("csv line " + std::to_string(line_no) + ": expected 5 fields");
    table.add(parse_number(f[0], line_no), f[1], parse_number(f[2], line_no), f[3], f[4]);
  }
  return table;
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  write_atomically(path, to_csv(table));
  if (!table.metadata.empty()) {
    std::string meta;
    for (const auto& [k, v] : table.metadata) meta += k + "=" + v + "\n";
    auto meta_path = path;
    meta_path += ".meta";
    write_atomically(meta_path, meta);
  }
}

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string to_plot_data(const ResultTable& table) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<std::pair<double, double>>> blocks;
  for (const auto& r : table.records()) {
    Key key{r.scenario, r.method, r.index};
    auto [it, inserted] = blocks.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.emplace_back(r.time, r.value);
  }
  std::string out;
  for (std::size_t b = 0; b < order.size(); ++b) {
    if (b > 0) out += "\n\n";
    const auto& [scenario, method, index] = order[b];
    out += "# scenario=" + scenario + " method=" + method + " index=" + index + "\n";
    auto& pts = blocks[order[b]];
    std::stable_sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [t, v] : pts) out += format_number(t) + " " + format_number(v) + "\n";
  }
  return out;
}

void emit_plot_data(const ResultTable& table, const std::filesystem::path& path) {
  write_atomically(path, to_plot_data(table));
}

}  // namespace mtq
