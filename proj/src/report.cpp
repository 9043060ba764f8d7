#include "mindex/report.hpp"

#include <cstdio>
#include <initializer_list>
#include <json.hpp>

namespace mindex::report {

using nlohmann::json;

namespace {

json num(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::Format, "report: " + what); }

double read_num(const json& j, const char* ctx) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  bad(std::string("expected a number for ") + ctx);
}

/// Checks that `j` is an object whose keys all belong to `allowed`.
const json& object(const json& j, const char* ctx, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(std::string(ctx) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || k == a;
    if (!known) bad("unknown field '" + k + "' in " + ctx);
  }
  return j;
}

const json& field(const json& j, const char* key, const char* ctx) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "' in " + ctx);
  return *it;
}

template <typename T>
T get_as(const json& j, const char* ctx) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    bad(std::string("wrong type for ") + ctx);
  }
}

json num_list(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> read_num_list(const json& j, const char* ctx) {
  if (!j.is_array()) bad(std::string(ctx) + " must be an array");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(read_num(e, ctx));
  return out;
}

std::vector<std::uint64_t> read_u64_list(const json& j, const char* ctx) {
  if (!j.is_array()) bad(std::string(ctx) + " must be an array");
  std::vector<std::uint64_t> out;
  for (const auto& e : j) out.push_back(get_as<std::uint64_t>(e, ctx));
  return out;
}

// ---- leaves ----

json grid_json(const GridSpec& g) {
  return {{"log10_x_min", num(g.log10_x_min)}, {"log10_x_max", num(g.log10_x_max)},
          {"points", g.points}, {"windows", g.windows}};
}

GridSpec grid_from(const json& j) {
  object(j, "grid", {"log10_x_min", "log10_x_max", "points", "windows"});
  GridSpec g;
  g.log10_x_min = read_num(field(j, "log10_x_min", "grid"), "grid.log10_x_min");
  g.log10_x_max = read_num(field(j, "log10_x_max", "grid"), "grid.log10_x_max");
  g.points = get_as<std::size_t>(field(j, "points", "grid"), "grid.points");
  g.windows = get_as<std::size_t>(field(j, "windows", "grid"), "grid.windows");
  return g;
}

std::string_view trend_name(Trend t) {
  switch (t) {
    case Trend::Stable: return "Stable";
    case Trend::Increasing: return "Increasing";
    case Trend::Decreasing: return "Decreasing";
    case Trend::Oscillating: return "Oscillating";
  }
  return "Stable";
}

Trend trend_from(const std::string& s) {
  for (Trend t : {Trend::Stable, Trend::Increasing, Trend::Decreasing, Trend::Oscillating}) {
    if (trend_name(t) == s) return t;
  }
  bad("unknown trend '" + s + "'");
}

json estimate_json(const IndexEstimate& e) {
  return {{"value", num(e.value)}, {"spread", num(e.spread)}, {"trend", trend_name(e.trend)},
          {"grid", grid_json(e.grid)}};
}

IndexEstimate estimate_from(const json& j) {
  object(j, "estimate", {"value", "spread", "trend", "grid"});
  IndexEstimate e;
  e.value = read_num(field(j, "value", "estimate"), "estimate.value");
  e.spread = read_num(field(j, "spread", "estimate"), "estimate.spread");
  e.trend = trend_from(get_as<std::string>(field(j, "trend", "estimate"), "estimate.trend"));
  e.grid = grid_from(field(j, "grid", "estimate"));
  return e;
}

json label_json(const ClassLabel& l) {
  json j{{"kind", to_string(l.kind)}, {"text", describe(l)}};
  if (l.kind == ClassLabel::Kind::M) j["rho"] = num(l.rho);
  if (l.kind == ClassLabel::Kind::Oscillating) {
    j["mu"] = num(l.mu);
    j["nu"] = num(l.nu);
  }
  return j;
}

ClassLabel label_from(const json& j) {
  object(j, "class", {"kind", "text", "rho", "mu", "nu"});
  auto kind = class_kind_from_string(get_as<std::string>(field(j, "kind", "class"), "class.kind"));
  try {
    switch (kind) {
      case ClassLabel::Kind::M: return ClassLabel::m(read_num(field(j, "rho", "class"), "class.rho"));
      case ClassLabel::Kind::MInf: return ClassLabel::m_inf();
      case ClassLabel::Kind::MNegInf: return ClassLabel::m_neg_inf();
      case ClassLabel::Kind::Oscillating:
        return ClassLabel::oscillating(read_num(field(j, "mu", "class"), "class.mu"),
                                       read_num(field(j, "nu", "class"), "class.nu"));
      case ClassLabel::Kind::Undecided: break;
    }
  } catch (const Error& e) {
    if (e.code() == Errc::Format) throw;
    bad(std::string("invalid class: ") + e.what());
  }
  return ClassLabel::undecided();
}

json condition_json(const ConditionReport& c) {
  json m = json::array();
  for (const auto& [k, v] : c.measured) m.push_back({{"name", k}, {"value", num(v)}});
  return {{"condition", c.condition}, {"passed", c.passed}, {"measured", m}, {"tolerance", num(c.tolerance)}};
}

ConditionReport condition_from(const json& j) {
  object(j, "condition", {"condition", "passed", "measured", "tolerance"});
  ConditionReport c;
  c.condition = get_as<std::string>(field(j, "condition", "condition"), "condition.condition");
  c.passed = get_as<bool>(field(j, "passed", "condition"), "condition.passed");
  c.tolerance = read_num(field(j, "tolerance", "condition"), "condition.tolerance");
  const json& m = field(j, "measured", "condition");
  if (!m.is_array()) bad("condition.measured must be an array");
  for (const auto& e : m) {
    object(e, "measured", {"name", "value"});
    c.measured.emplace_back(get_as<std::string>(field(e, "name", "measured"), "measured.name"),
                            read_num(field(e, "value", "measured"), "measured.value"));
  }
  return c;
}

json conditions_json(const std::vector<ConditionReport>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(condition_json(c));
  return a;
}

std::vector<ConditionReport> conditions_from(const json& j) {
  if (!j.is_array()) bad("conditions must be an array");
  std::vector<ConditionReport> out;
  for (const auto& e : j) out.push_back(condition_from(e));
  return out;
}

// ---- sections ----

json input_json(const InputDescriptor& in) {
  json j{{"kind", in.kind}};
  if (in.kind == "named") {
    j["name"] = in.name;
    json p = json::object();
    for (const auto& [k, v] : in.params) p[k] = num(v);
    j["params"] = p;
  } else {
    j["path"] = in.path;
    j["digest"] = in.digest;
  }
  return j;
}

InputDescriptor input_from(const json& j) {
  object(j, "input", {"kind", "name", "params", "path", "digest"});
  InputDescriptor in;
  in.kind = get_as<std::string>(field(j, "kind", "input"), "input.kind");
  if (in.kind == "named") {
    in.name = get_as<std::string>(field(j, "name", "input"), "input.name");
    const json& p = field(j, "params", "input");
    if (!p.is_object()) bad("input.params must be an object");
    for (const auto& [k, v] : p.items()) in.params[k] = read_num(v, "input.params");
  } else if (in.kind == "file") {
    in.path = get_as<std::string>(field(j, "path", "input"), "input.path");
    in.digest = get_as<std::string>(field(j, "digest", "input"), "input.digest");
  } else {
    bad("input.kind must be 'named' or 'file'");
  }
  return in;
}

json estimates_json(const Estimates& e) {
  json j = json::object();
  if (e.mu) j["mu"] = estimate_json(*e.mu);
  if (e.nu) j["nu"] = estimate_json(*e.nu);
  if (e.kappa) j["kappa"] = estimate_json(*e.kappa);
  if (e.rho) j["rho"] = estimate_json(*e.rho);
  return j;
}

Estimates estimates_from(const json& j) {
  object(j, "estimates", {"mu", "nu", "kappa", "rho"});
  Estimates e;
  if (j.contains("mu")) e.mu = estimate_from(j["mu"]);
  if (j.contains("nu")) e.nu = estimate_from(j["nu"]);
  if (j.contains("kappa")) e.kappa = estimate_from(j["kappa"]);
  if (j.contains("rho")) e.rho = estimate_from(j["rho"]);
  return e;
}

json domain_json(const evt::DomainReport& d) {
  return {{"verdict", evt::to_string(d.verdict)}, {"alpha", num(d.alpha)}, {"class", label_json(d.label)},
          {"evidence", conditions_json(d.evidence)}};
}

evt::DomainReport domain_from(const json& j) {
  object(j, "domain", {"verdict", "alpha", "class", "evidence"});
  evt::DomainReport d;
  d.verdict = evt::verdict_from_string(get_as<std::string>(field(j, "verdict", "domain"), "domain.verdict"));
  d.alpha = read_num(field(j, "alpha", "domain"), "domain.alpha");
  d.label = label_from(field(j, "class", "domain"));
  d.evidence = conditions_from(field(j, "evidence", "domain"));
  return d;
}

json simulation_json(const evt::SimulationResult& s) {
  json emp = json::array();
  for (const auto& row : s.empirical_cdfs) emp.push_back(num_list(row));
  json ex = json::array();
  for (const auto& row : s.exact_cdfs) ex.push_back(num_list(row));
  json j{{"n_values", s.n_values}, {"a_n", num_list(s.a_n)},     {"b_n", num_list(s.b_n)},
         {"abscissae", num_list(s.abscissae)}, {"empirical_cdfs", emp}, {"exact_cdfs", ex},
         {"distances", num_list(s.distances)}, {"reps", s.reps},   {"seed", s.seed}};
  if (s.candidate_alpha) j["candidate_alpha"] = num(*s.candidate_alpha);
  return j;
}

evt::SimulationResult simulation_from(const json& j) {
  object(j, "simulation", {"n_values", "a_n", "b_n", "abscissae", "empirical_cdfs", "exact_cdfs", "distances",
                           "reps", "seed", "candidate_alpha"});
  evt::SimulationResult s;
  s.n_values = read_u64_list(field(j, "n_values", "simulation"), "simulation.n_values");
  s.a_n = read_num_list(field(j, "a_n", "simulation"), "simulation.a_n");
  s.b_n = read_num_list(field(j, "b_n", "simulation"), "simulation.b_n");
  s.abscissae = read_num_list(field(j, "abscissae", "simulation"), "simulation.abscissae");
  for (const char* key : {"empirical_cdfs", "exact_cdfs"}) {
    const json& rows = field(j, key, "simulation");
    if (!rows.is_array()) bad(std::string("simulation.") + key + " must be an array");
    auto& dst = std::string(key) == "empirical_cdfs" ? s.empirical_cdfs : s.exact_cdfs;
    for (const auto& r : rows) dst.push_back(read_num_list(r, key));
  }
  s.distances = read_num_list(field(j, "distances", "simulation"), "simulation.distances");
  s.reps = get_as<std::uint64_t>(field(j, "reps", "simulation"), "simulation.reps");
  s.seed = get_as<std::uint64_t>(field(j, "seed", "simulation"), "simulation.seed");
  if (j.contains("candidate_alpha")) s.candidate_alpha = read_num(j["candidate_alpha"], "simulation.candidate_alpha");
  return s;
}

json witness_json(const evt::SubsequenceWitness& w) {
  return {{"n_first", w.n_first},   {"n_second", w.n_second}, {"ks_simulated", num_list(w.ks_simulated)},
          {"ks_exact", num_list(w.ks_exact)}, {"reps", w.reps}, {"seed", w.seed}};
}

evt::SubsequenceWitness witness_from(const json& j) {
  object(j, "witness", {"n_first", "n_second", "ks_simulated", "ks_exact", "reps", "seed"});
  evt::SubsequenceWitness w;
  w.n_first = read_u64_list(field(j, "n_first", "witness"), "witness.n_first");
  w.n_second = read_u64_list(field(j, "n_second", "witness"), "witness.n_second");
  w.ks_simulated = read_num_list(field(j, "ks_simulated", "witness"), "witness.ks_simulated");
  w.ks_exact = read_num_list(field(j, "ks_exact", "witness"), "witness.ks_exact");
  w.reps = get_as<std::uint64_t>(field(j, "reps", "witness"), "witness.reps");
  w.seed = get_as<std::uint64_t>(field(j, "seed", "witness"), "witness.seed");
  return w;
}

json evt_json(const EvtSummary& e) {
  json j = json::object();
  if (e.domain) j["domain"] = domain_json(*e.domain);
  if (e.simulation) j["simulation"] = simulation_json(*e.simulation);
  if (e.witness) j["witness"] = witness_json(*e.witness);
  return j;
}

EvtSummary evt_from(const json& j) {
  object(j, "evt", {"domain", "simulation", "witness"});
  EvtSummary e;
  if (j.contains("domain")) e.domain = domain_from(j["domain"]);
  if (j.contains("simulation")) e.simulation = simulation_from(j["simulation"]);
  if (j.contains("witness")) e.witness = witness_from(j["witness"]);
  return e;
}

json provenance_json(const Provenance& p) {
  json j{{"grid", grid_json(p.grid)}, {"tol", num(p.tol)}, {"tool_version", p.tool_version}};
  if (p.kappa) {
    j["kappa"] = {{"r_lo", num(p.kappa->r_lo)},
                  {"r_hi", num(p.kappa->r_hi)},
                  {"bisect_tol", num(p.kappa->bisect_tol)},
                  {"probe_grid", grid_json(p.kappa->probe_grid)},
                  {"inf_threshold", num(p.kappa->inf_threshold)}};
  }
  if (p.transform) {
    j["transform"] = {{"s_max", num(p.transform->s_max)},
                      {"s_min", num(p.transform->s_min)},
                      {"s_points", p.transform->s_points},
                      {"quad_rel_tol", num(p.transform->quad_rel_tol)},
                      {"cutoff_nats", num(p.transform->cutoff_nats)}};
  }
  if (p.seed) j["seed"] = *p.seed;
  return j;
}

Provenance provenance_from(const json& j) {
  object(j, "provenance", {"grid", "tol", "tool_version", "kappa", "transform", "seed"});
  Provenance p;
  p.grid = grid_from(field(j, "grid", "provenance"));
  p.tol = read_num(field(j, "tol", "provenance"), "provenance.tol");
  p.tool_version = get_as<std::string>(field(j, "tool_version", "provenance"), "provenance.tool_version");
  if (j.contains("kappa")) {
    const json& k = object(j["kappa"], "kappa", {"r_lo", "r_hi", "bisect_tol", "probe_grid", "inf_threshold"});
    order::KappaConfig c;
    c.r_lo = read_num(field(k, "r_lo", "kappa"), "kappa.r_lo");
    c.r_hi = read_num(field(k, "r_hi", "kappa"), "kappa.r_hi");
    c.bisect_tol = read_num(field(k, "bisect_tol", "kappa"), "kappa.bisect_tol");
    c.probe_grid = grid_from(field(k, "probe_grid", "kappa"));
    c.inf_threshold = read_num(field(k, "inf_threshold", "kappa"), "kappa.inf_threshold");
    p.kappa = c;
  }
  if (j.contains("transform")) {
    const json& t =
        object(j["transform"], "transform", {"s_max", "s_min", "s_points", "quad_rel_tol", "cutoff_nats"});
    tauberian::TransformConfig c;
    c.s_max = read_num(field(t, "s_max", "transform"), "transform.s_max");
    c.s_min = read_num(field(t, "s_min", "transform"), "transform.s_min");
    c.s_points = get_as<std::size_t>(field(t, "s_points", "transform"), "transform.s_points");
    c.quad_rel_tol = read_num(field(t, "quad_rel_tol", "transform"), "transform.quad_rel_tol");
    c.cutoff_nats = read_num(field(t, "cutoff_nats", "transform"), "transform.cutoff_nats");
    p.transform = c;
  }
  if (j.contains("seed")) p.seed = get_as<std::uint64_t>(j["seed"], "provenance.seed");
  return p;
}

}  // namespace

std::string to_json(const ReportDocument& doc) {
  json j{{"schema_version", doc.schema_version},
         {"command", doc.command},
         {"input", input_json(doc.input)},
         {"class", label_json(doc.label)},
         {"estimates", estimates_json(doc.estimates)},
         {"conditions", conditions_json(doc.conditions)},
         {"provenance", provenance_json(doc.provenance)}};
  if (doc.evt) j["evt"] = evt_json(*doc.evt);
  return j.dump(2);
}

ReportDocument from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  object(j, "document",
         {"schema_version", "command", "input", "class", "estimates", "conditions", "provenance", "evt"});
  ReportDocument doc;
  doc.schema_version = get_as<std::string>(field(j, "schema_version", "document"), "schema_version");
  if (doc.schema_version != kSchemaVersion) bad("unsupported schema_version '" + doc.schema_version + "'");
  doc.command = get_as<std::string>(field(j, "command", "document"), "command");
  doc.input = input_from(field(j, "input", "document"));
  doc.label = label_from(field(j, "class", "document"));
  doc.estimates = estimates_from(field(j, "estimates", "document"));
  doc.conditions = conditions_from(field(j, "conditions", "document"));
  doc.provenance = provenance_from(field(j, "provenance", "document"));
  if (j.contains("evt")) doc.evt = evt_from(j["evt"]);
  return doc;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mindex::report
