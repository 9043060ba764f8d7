#include "mindex/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "mindex/corpus.hpp"
#include "mindex/evt.hpp"
#include "mindex/karamata.hpp"
#include "mindex/order.hpp"
#include "mindex/report.hpp"
#include "mindex/table.hpp"
#include "mindex/tauberian.hpp"

namespace mindex::cli {

namespace {

struct Options {
  std::string fn;
  std::string data;
  std::vector<std::string> params;
  std::optional<double> xmin;
  std::optional<double> xmax;
  std::optional<std::size_t> points;
  double tol = order::kDefaultTol;
  std::vector<double> r;
  double b = 2.0;
  bool tauberian = false;
  std::vector<std::uint64_t> n;
  std::uint64_t reps = 200;
  std::optional<std::uint64_t> seed;
  bool subsequences = false;
  std::string out;
  std::string plots;
  bool json = true;
};

/// Raised for malformed invocations that CLI11 itself accepts.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an output path cannot be written.
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--fn", o.fn, "corpus function name");
  sub->add_option("--data", o.data, "CSV table with header x,value or x,logvalue");
  sub->add_option("--param", o.params, "function parameter K=V (repeatable)");
  sub->add_option("--xmin", o.xmin, "log10 of the grid start");
  sub->add_option("--xmax", o.xmax, "log10 of the grid end");
  sub->add_option("--points", o.points, "grid points");
  sub->add_option("--tol", o.tol, "classification tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "write the JSON report here instead of stdout");
  sub->add_option("--plots", o.plots, "directory for CSV plot data");
  sub->add_flag("--json", o.json, "emit JSON (the only format)");
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::Param:
    case Errc::UnknownName:
    case Errc::Arity:
      return kExitUsage;
    case Errc::Domain:
    case Errc::Format:
    case Errc::PositivityViolation:
    case Errc::ClassMismatch:
    case Errc::Endpoint:
      return kExitData;
    case Errc::QuadratureFailure:
    case Errc::SingularDenominator:
    case Errc::DivergentTail:
    case Errc::UndecidedConvergence:
    case Errc::Precondition:
    case Errc::NonDifferentiable:
    case Errc::Quantile:
      return kExitNumeric;
  }
  return kExitNumeric;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects K=V, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != val.size()) throw UsageError("--param " + key + " needs a numeric value");
    if (!out.emplace(key, v).second) throw UsageError("--param " + key + " given twice");
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Format, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Input {
  FunctionHandle u;
  report::InputDescriptor desc;
  bool table = false;
  double table_lo = 0.0;
  double table_hi = 0.0;
};

Input load_input(const Options& o) {
  if (o.fn.empty() == o.data.empty()) throw UsageError("exactly one of --fn or --data is required");
  if (!o.fn.empty()) {
    auto params = parse_params(o.params);
    Input in{make_named(o.fn, params), {}};
    in.desc.kind = "named";
    in.desc.name = o.fn;
    in.desc.params = params;
    return in;
  }
  if (!o.params.empty()) throw UsageError("--param applies to --fn only");
  const std::string text = slurp(o.data);
  TableData t = parse_csv(text);
  Input in{from_table(t, std::filesystem::path(o.data).filename().string()), {}};
  in.desc.kind = "file";
  in.desc.path = o.data;
  in.desc.digest = "fnv1a64:" + report::fnv1a64_hex(text);
  in.table = true;
  in.table_lo = t.rows.front().x;
  in.table_hi = t.rows.back().x;
  return in;
}

GridSpec resolve_grid(const Options& o, const Input& in, GridSpec base) {
  if (in.table) {
    if (!(in.table_hi > 1.0)) throw Error(Errc::Domain, "table must extend beyond x = 1");
    base.log10_x_min = std::max(0.0, std::log10(in.table_lo));
    base.log10_x_max = std::log10(in.table_hi);
  }
  if (o.xmin) base.log10_x_min = *o.xmin;
  if (o.xmax) base.log10_x_max = *o.xmax;
  if (o.points) base.points = *o.points;
  if (in.table) {
    // Keep the grid inside the tabulated range despite rounding in log10.
    base.log10_x_min = std::max(base.log10_x_min, std::log10(in.table_lo) + 1e-12);
    base.log10_x_max = std::min(base.log10_x_max, std::log10(in.table_hi) - 1e-12);
  }
  base.validate();
  return base;
}

IndexEstimate rho_estimate(const ClassLabel& label, const order::Orders& o, const GridSpec& grid) {
  IndexEstimate e;
  e.value = label.rho;
  e.spread = o.nu.value - o.mu.value;
  e.trend = Trend::Stable;
  e.grid = grid;
  return e;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw OutputError("cannot write '" + path.string() + "'");
  f << text;
  f.close();
  if (!f) throw OutputError("cannot write '" + path.string() + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_plots(const std::string& dir, const FunctionHandle& u, const GridSpec& grid,
                const std::vector<order::KappaProbe>& trace) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create '" + dir + "': " + ec.message());
  const std::filesystem::path root(dir);
  const auto xs = grid.abscissae();

  std::string orders = "x,log_u_over_log_x\n";
  for (double x : xs) {
    if (x <= 1.0) continue;
    orders += fmt(x) + "," + fmt(u.eval_log(x) / std::log(x)) + "\n";
  }
  write_text(root / "orders.csv", orders);

  std::string kappa = "r,verdict,last_partial_integral\n";
  for (const auto& p : trace) {
    const double last = p.verdict.trace.empty() ? 0.0 : std::exp(p.verdict.trace.back().log_partial);
    kappa += fmt(p.r) + "," + std::string(order::to_string(p.verdict.tag)) + "," + fmt(last) + "\n";
  }
  write_text(root / "kappa_trace.csv", kappa);

  std::string ratio = "t,x,ratio\n";
  for (double t : {2.0, 3.0, 5.0, 10.0}) {
    for (double x : xs) {
      if (x * t > u.support_ceiling()) continue;
      double v = 0.0;
      try {
        v = std::exp(u.eval_log(x * t) - u.eval_log(x));
      } catch (const Error& e) {
        if (e.code() != Errc::Domain) throw;
        continue;
      }
      ratio += fmt(t) + "," + fmt(x) + "," + fmt(v) + "\n";
    }
  }
  write_text(root / "ratio.csv", ratio);
}

void emit(const Options& o, const report::ReportDocument& doc, std::ostream& out) {
  const std::string text = report::to_json(doc) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    write_text(o.out, text);
  }
}

/// Fills the class and order estimates shared by classify and report.
order::Orders fill_orders(report::ReportDocument& doc, const FunctionHandle& u, const GridSpec& grid, double tol) {
  order::Orders orders = order::estimate_orders(u, grid);
  doc.label = order::classify_orders(orders, tol);
  doc.estimates.mu = orders.mu;
  doc.estimates.nu = orders.nu;
  if (doc.label.is_m()) doc.estimates.rho = rho_estimate(doc.label, orders, grid);
  doc.provenance.grid = grid;
  doc.provenance.tol = tol;
  return orders;
}

int run_classify(const Options& o, std::ostream& out) {
  Input in = load_input(o);
  const GridSpec grid = resolve_grid(o, in, GridSpec{});
  report::ReportDocument doc;
  doc.command = "classify";
  doc.input = in.desc;
  fill_orders(doc, in.u, grid, o.tol);
  std::vector<order::KappaProbe> trace;
  if (!in.table) {
    order::KappaConfig kcfg;
    doc.estimates.kappa = order::estimate_kappa(in.u, kcfg, &trace);
    doc.provenance.kappa = kcfg;
  }
  if (!o.plots.empty()) emit_plots(o.plots, in.u, grid, trace);
  emit(o, doc, out);
  return doc.label.decided() ? kExitOk : kExitUndecided;
}

const std::vector<double>& default_r_values() {
  static const std::vector<double> r{-1.0, 0.5, 1.0, 3.0};
  return r;
}

/// Report grid for the domain-of-attraction checks: the default range, where
/// every corpus tail is still representable in double precision.
GridSpec domain_grid(const Options& o, const Input& in) { return resolve_grid(o, in, GridSpec{}); }

void add_domain_report(report::ReportDocument& doc, const Options& o, const Input& in) {
  const auto d = evt::make_distribution(in.u);
  const GridSpec grid = domain_grid(o, in);
  report::EvtSummary summary;
  summary.domain = evt::classify_domain_attraction(d, grid, o.tol);

  // Threshold-excess probe with xi and the scale constant calibrated on the index.
  double kappa = doc.estimates.kappa ? doc.estimates.kappa->value : kInf;
  const bool finite = std::isfinite(kappa) && kappa > 0.0;
  const double xi = finite ? 1.0 / kappa : 0.0;
  const double c = finite ? 1.0 / kappa : 1.0;
  const auto family = evt::default_scale_family(c);
  const std::vector<double> probes{0.5, 1.0, 2.0, 5.0, 10.0};
  doc.conditions.push_back(evt::gpd_ratio_probe(d, xi, family, probes, grid, o.tol));
  doc.evt = summary;
}

int run_report(const Options& o, std::ostream& out) {
  Input in = load_input(o);
  const GridSpec grid = resolve_grid(o, in, wide_grid());
  report::ReportDocument doc;
  doc.command = "report";
  doc.input = in.desc;
  fill_orders(doc, in.u, grid, o.tol);
  const ClassLabel label = doc.label;

  std::vector<order::KappaProbe> trace;
  order::KappaConfig kcfg;
  if (!in.table) {
    doc.estimates.kappa = order::estimate_kappa(in.u, kcfg, &trace);
    doc.provenance.kappa = kcfg;
  }

  static const std::vector<double> kTs{2.0, 3.0, 5.0, 10.0};
  if (label.is_m()) {
    if (!in.table) doc.conditions.push_back(order::check_second_characterization(in.u, grid, kcfg, o.tol));
    doc.conditions.push_back(order::rv_ratio_test(in.u, kTs, grid, o.tol));
    auto rep = karamata::extract_representation(in.u, o.b, grid, o.tol);
    doc.conditions.push_back(karamata::verify_representation(in.u, rep, grid, o.tol));
    for (double r : o.r.empty() ? default_r_values() : o.r) {
      doc.conditions.push_back(karamata::karamata_theorem_report(in.u, r, o.b, grid, o.tol));
    }
  } else if (label.is_infinite()) {
    auto rep = karamata::extract_representation_inf(in.u, o.b, grid);
    doc.conditions.push_back(karamata::verify_representation_inf(in.u, rep, grid));
  } else if (label.kind == ClassLabel::Kind::Oscillating) {
    doc.conditions.push_back(order::rv_ratio_test(in.u, kTs, grid, o.tol));
  }

  if (label.decided() && !in.table && in.u.truth() && in.u.truth()->is_tail) add_domain_report(doc, o, in);

  if (o.tauberian) {
    FunctionHandle target = in.u;
    // The power member is 1 below x = 1; its ramp counterpart vanishes at 0+ as the transform requires.
    if (!in.table && in.u.name() == "power_tail" && in.u.params().at("alpha") > 0.0) {
      target = make_ramp_power(in.u.params().at("alpha"));
    }
    tauberian::TransformConfig tcfg;
    const GridSpec tgrid{1.0, 280.0, 2000, 8};
    doc.conditions.push_back(tauberian::tauberian_check(target, tcfg, tgrid, o.tol));
    doc.provenance.transform = tcfg;
  }

  if (!o.plots.empty()) emit_plots(o.plots, in.u, grid, trace);
  emit(o, doc, out);
  return label.decided() ? kExitOk : kExitUndecided;
}

int run_simulate(const Options& o, std::ostream& out) {
  if (o.reps >= 1000 && !o.seed) throw UsageError("--seed is required when --reps >= 1000");
  Input in = load_input(o);
  if (in.table || !in.u.truth() || !in.u.truth()->is_tail) {
    throw Error(Errc::Domain, "simulate needs a corpus distribution tail");
  }
  const std::uint64_t seed = o.seed.value_or(0);
  const GridSpec grid = resolve_grid(o, in, GridSpec{});
  report::ReportDocument doc;
  doc.command = "simulate";
  doc.input = in.desc;
  fill_orders(doc, in.u, grid, o.tol);
  doc.provenance.seed = seed;

  const auto d = evt::make_distribution(in.u);
  std::optional<double> alpha;
  const auto& truth = *in.u.truth();
  if (truth.regularly_varying.value_or(false) && truth.rho && *truth.rho < 0.0) alpha = -*truth.rho;

  report::EvtSummary summary;
  const std::vector<std::uint64_t> ns = o.n.empty() ? std::vector<std::uint64_t>{1000} : o.n;
  summary.simulation = evt::block_maxima_simulate(d, ns, o.reps, seed, {}, alpha);
  if (o.subsequences) {
    const std::vector<int> ks{6, 8, 10, 12};
    summary.witness = evt::subsequence_witness(d, ks, o.reps, seed);
  }
  doc.evt = summary;
  emit(o, doc, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classify positive functions by their asymptotic polynomial order", "mindex"};
  app.require_subcommand(1);
  Options o;
  CLI::App* classify = app.add_subcommand("classify", "orders, class label and index estimate");
  CLI::App* rep = app.add_subcommand("report", "class-specific condition suite");
  CLI::App* sim = app.add_subcommand("simulate", "block-maxima simulation of a distribution tail");
  for (CLI::App* s : {classify, rep, sim}) add_common(s, o);
  rep->add_option("--r", o.r, "exponents for the Karamata branches");
  rep->add_option("--b", o.b, "representation base point")->check(CLI::Range(1.0 + 1e-12, 1e300));
  rep->add_flag("--tauberian", o.tauberian, "also run the Laplace-Stieltjes index check");
  sim->add_option("--n", o.n, "block sizes");
  sim->add_option("--reps", o.reps, "replicas per block size");
  sim->add_option("--seed", o.seed, "random seed");
  sim->add_flag("--subsequences", o.subsequences, "compare n = 2^k against n = 3 * 2^k");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mindex: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (classify->parsed()) return run_classify(o, out);
    if (rep->parsed()) return run_report(o, out);
    return run_simulate(o, out);
  } catch (const UsageError& e) {
    err << "mindex: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OutputError& e) {
    err << "mindex: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    err << "mindex: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace mindex::cli
