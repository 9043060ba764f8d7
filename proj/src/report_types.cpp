#include "mindex/report_types.hpp"

namespace mindex {

std::optional<double> ConditionReport::get(const std::string& key) const {
  for (const auto& [k, v] : measured) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void ConditionReport::set(const std::string& key, double value) {
  for (auto& [k, v] : measured) {
    if (k == key) {
      v = value;
      return;
    }
  }
  measured.emplace_back(key, value);
}

}  // namespace mindex
