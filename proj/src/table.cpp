#include "mindex/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mindex {

FunctionHandle from_table(const TableData& data, std::string name) {
  if (data.rows.size() < kMinTableRows) {
    throw Error(Errc::Format, "table needs at least " + std::to_string(kMinTableRows) + " rows, got " +
                                  std::to_string(data.rows.size()));
  }
  std::vector<double> lx;
  std::vector<double> lv;
  lx.reserve(data.rows.size());
  lv.reserve(data.rows.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& row = data.rows[i];
    if (!std::isfinite(row.x) || !(row.x > 0.0)) throw Error(Errc::Format, "row " + std::to_string(i) + ": x must be positive");
    if (i > 0 && !(row.x > prev)) throw Error(Errc::Format, "row " + std::to_string(i) + ": x not strictly increasing");
    prev = row.x;
    if (!std::isfinite(row.v)) throw Error(Errc::Format, "row " + std::to_string(i) + ": value is not finite");
    double logv = row.v;
    if (row.kind == TableData::ValueKind::Linear) {
      if (!(row.v > 0.0)) throw Error(Errc::PositivityViolation, "row " + std::to_string(i) + ": value must be positive");
      logv = std::log(row.v);
    }
    lx.push_back(std::log(row.x));
    lv.push_back(logv);
  }

  const double x_lo = data.rows.front().x;
  const double x_hi = data.rows.back().x;
  FunctionHandle::Spec s;
  s.name = std::move(name);
  s.support_ceiling = x_hi;
  s.log_eval = [lx, lv, x_lo, x_hi](double x) {
    if (x < x_lo || x > x_hi) throw Error(Errc::Domain, "table queried outside its range");
    double u = std::log(x);
    auto it = std::upper_bound(lx.begin(), lx.end(), u);
    if (it == lx.end()) return lv.back();
    std::size_t j = static_cast<std::size_t>(it - lx.begin());
    if (j == 0) return lv.front();
    double w = (u - lx[j - 1]) / (lx[j] - lx[j - 1]);
    return lv[j - 1] + w * (lv[j] - lv[j - 1]);
  };
  return FunctionHandle(std::move(s));
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw Error(Errc::Format, "line " + std::to_string(line_no) + ": cannot parse number '" + field + "'");
  }
  return v;
}

}  // namespace

TableData parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  TableData data;
  bool header_seen = false;
  TableData::ValueKind kind = TableData::ValueKind::Linear;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw Error(Errc::Format, "line " + std::to_string(line_no) + ": expected two comma-separated fields");
    }
    std::string a = trim(std::string_view(t).substr(0, comma));
    std::string b = trim(std::string_view(t).substr(comma + 1));
    if (!header_seen) {
      if (a != "x" || (b != "value" && b != "logvalue")) {
        throw Error(Errc::Format, "header must be 'x,value' or 'x,logvalue'");
      }
      kind = b == "value" ? TableData::ValueKind::Linear : TableData::ValueKind::Log;
      header_seen = true;
      continue;
    }
    data.rows.push_back({parse_number(a, line_no), kind, parse_number(b, line_no)});
  }
  if (!header_seen) throw Error(Errc::Format, "empty CSV input");
  return data;
}

TableData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Format, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace mindex
