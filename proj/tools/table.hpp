#pragma once

// Column-oriented result table with CSV and JSON writers. Numbers are
// printed at 9 significant digits in both formats so reruns are
// byte-identical.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rxlink::cli {

using Cell = std::variant<double, long, bool, std::string>;

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct Column {
  std::string name;  // with unit suffix, e.g. data_rate_Hz
  std::vector<Cell> cells;
};

class Table {
 public:
  explicit Table(std::vector<std::string> names) {
    for (auto& n : names) cols_.push_back({std::move(n), {}});
  }

  void add_row(std::vector<Cell> row) {
    if (row.size() != cols_.size()) throw std::logic_error("table row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) cols_[i].cells.push_back(std::move(row[i]));
  }

  std::size_t rows() const { return cols_.empty() ? 0 : cols_.front().cells.size(); }

  void write_csv(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& meta) const {
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
    for (std::size_t i = 0; i < cols_.size(); ++i) os << (i ? "," : "") << cols_[i].name;
    os << "\n";
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t i = 0; i < cols_.size(); ++i) {
        if (i) os << ",";
        os << csv_cell(cols_[i].cells[r]);
      }
      os << "\n";
    }
  }

  void write_json(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& meta) const {
    nlohmann::ordered_json doc;
    for (const auto& [k, v] : meta) doc["meta"][k] = v;
    doc["columns"] = nlohmann::ordered_json::object();
    for (const auto& c : cols_) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& cell : c.cells) arr.push_back(json_cell(cell));
      doc["columns"][c.name] = std::move(arr);
    }
    os << doc.dump(2) << "\n";
  }

 private:
  static std::string csv_cell(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return format_number(*d);
    if (auto l = std::get_if<long>(&c)) return std::to_string(*l);
    if (auto b = std::get_if<bool>(&c)) return *b ? "1" : "0";
    return std::get<std::string>(c);
  }

  static nlohmann::ordered_json json_cell(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) {
      if (!std::isfinite(*d)) return nullptr;
      return std::stod(format_number(*d));
    }
    if (auto l = std::get_if<long>(&c)) return *l;
    if (auto b = std::get_if<bool>(&c)) return *b;
    return std::get<std::string>(c);
  }

  std::vector<Column> cols_;
};

}  // namespace rxlink::cli
