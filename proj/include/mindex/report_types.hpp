#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mindex {

/// Verdict of a named condition check (C1r, K3*, VM1, PBDH, ...).
struct ConditionReport {
  std::string condition;
  bool passed = false;
  std::vector<std::pair<std::string, double>> measured;
  double tolerance = 0.0;

  std::optional<double> get(const std::string& key) const;
  void set(const std::string& key, double value);

  friend bool operator==(const ConditionReport&, const ConditionReport&) = default;
};

}  // namespace mindex
