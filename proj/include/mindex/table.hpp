#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mindex/function.hpp"

namespace mindex {

struct TableData {
  enum class ValueKind { Linear, Log };

  struct Row {
    double x = 0.0;
    ValueKind kind = ValueKind::Linear;
    double v = 0.0;
  };

  std::vector<Row> rows;
};

inline constexpr std::size_t kMinTableRows = 8;

/// Handle interpolating linearly in (log x, log U). Queries outside the
/// tabulated range raise Errc::Domain; there is no extrapolation.
FunctionHandle from_table(const TableData& data, std::string name = "table");

/// Parses `x,value` or `x,logvalue` CSV text.
TableData parse_csv(const std::string& text);
TableData read_csv(const std::filesystem::path& path);

}  // namespace mindex
