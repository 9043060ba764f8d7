#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mindex/evt.hpp"
#include "mindex/grid.hpp"
#include "mindex/order.hpp"
#include "mindex/report_types.hpp"
#include "mindex/tauberian.hpp"

namespace mindex::report {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "0.1.0";

struct InputDescriptor {
  std::string kind = "named";  ///< "named" or "file"
  std::string name;
  std::map<std::string, double> params;
  std::string path;
  std::string digest;  ///< "fnv1a64:<hex>" of the file contents

  friend bool operator==(const InputDescriptor&, const InputDescriptor&) = default;
};

struct Estimates {
  std::optional<IndexEstimate> mu;
  std::optional<IndexEstimate> nu;
  std::optional<IndexEstimate> kappa;
  std::optional<IndexEstimate> rho;

  friend bool operator==(const Estimates&, const Estimates&) = default;
};

struct EvtSummary {
  std::optional<evt::DomainReport> domain;
  std::optional<evt::SimulationResult> simulation;
  std::optional<evt::SubsequenceWitness> witness;

  friend bool operator==(const EvtSummary&, const EvtSummary&) = default;
};

struct Provenance {
  GridSpec grid;
  double tol = 0.05;
  std::optional<order::KappaConfig> kappa;
  std::optional<tauberian::TransformConfig> transform;
  std::optional<std::uint64_t> seed;
  std::string tool_version = kToolVersion;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ReportDocument {
  std::string schema_version = kSchemaVersion;
  std::string command;
  InputDescriptor input;
  ClassLabel label;
  Estimates estimates;
  std::vector<ConditionReport> conditions;
  std::optional<EvtSummary> evt;
  Provenance provenance;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

/// Infinite values are written as the strings "+inf" and "-inf".
std::string to_json(const ReportDocument& doc);
/// Throws Errc::Format on malformed input, unknown fields or a schema version other than "1".
ReportDocument from_json(const std::string& text);

std::string fnv1a64_hex(const std::string& bytes);

}  // namespace mindex::report
