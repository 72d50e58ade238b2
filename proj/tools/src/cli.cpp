#include "finslerlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "finslerlab/catalog.hpp"
#include "finslerlab/manifold_spec.hpp"
#include "finslerlab/probes.hpp"
#include "finslerlab/randers.hpp"
#include "finslerlab/scurvature.hpp"
#include "finslerlab/validation.hpp"

#ifndef FINSLERLAB_VERSION
#define FINSLERLAB_VERSION "0.0.0"
#endif

namespace finslerlab::cli {

std::string_view version() { return FINSLERLAB_VERSION; }

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::string_view kCatalogPrefix = "catalog:";
constexpr double kOracleTolerance = 1e-5;

struct Options {
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  int probes = kDefaultProbeCount;
  double tol_killing = kDefaultKillingTolerance;
  double tol_length = kDefaultLengthTolerance;
  double tol_s = 1e-8;
  bool timing = false;

  std::string measure;
  std::string density;
  std::vector<double> point;
  std::vector<double> vector;
  bool oracle = false;
  double h = 1e-3;
  int transport_steps = 100;

  std::vector<double> from;
  std::vector<double> dir;
  double time = 1.0;
  int steps = 1000;
  bool csv = false;

  std::uint64_t samples = 1'000'000;
  int workers = 4;
  int transport_probes = 50;

  std::string catalog_name;
};

struct Loaded {
  std::string digest;
  ManifoldSpec spec;
  RandersSpace space;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Loaded load(const std::string& path) {
  std::string text;
  ManifoldSpec spec;
  if (path.starts_with(kCatalogPrefix)) {
    const auto name = std::string_view(path).substr(kCatalogPrefix.size());
    try {
      spec = catalog_spec(name);
    } catch (const std::out_of_range&) {
      throw UsageError("unknown catalog space '" + std::string(name) + "'");
    }
    text = to_json_text(spec);
  } else {
    text = read_file(path);
    try {
      spec = parse_manifold_spec(text);
    } catch (const InvalidSpace& e) {
      throw SpecError(e.what());
    }
  }
  try {
    RandersSpace space = build_space(spec);
    return Loaded{sha256_hex(text), std::move(spec), std::move(space)};
  } catch (const ParseError& e) {
    throw SpecError(std::string("expression error: ") + e.what());
  } catch (const InvalidSpace& e) {
    throw SpecError(e.what());
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
}

std::uint64_t resolve_seed(const Options& opt) {
  if (opt.seed) return *opt.seed;
  if (const char* env = std::getenv("FINSLERLAB_SEED"); env && *env) {
    const std::string_view text(env);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw UsageError("FINSLERLAB_SEED is not an unsigned integer: '" + std::string(text) + "'");
    }
    return value;
  }
  return kDefaultSeed;
}

Json header(std::string_view command, const Loaded* loaded, const std::string& source) {
  Json j;
  j["tool"] = "finslerlab";
  j["version"] = std::string(version());
  j["command"] = std::string(command);
  if (loaded) {
    j["spec"] = {{"source", source}, {"name", loaded->spec.name}, {"sha256", loaded->digest}};
  }
  return j;
}

Json tolerances(const Options& opt) {
  return {{"killing", opt.tol_killing}, {"length", opt.tol_length}, {"s", opt.tol_s}};
}

void require_dimension(const std::vector<double>& v, int n, const char* what) {
  if (static_cast<int>(v.size()) != n) {
    throw UsageError(std::string(what) + " needs " + std::to_string(n) + " components, got " +
                     std::to_string(v.size()));
  }
}

void require_inside(const RandersSpace& space, const std::vector<double>& x, const char* what) {
  require_dimension(x, space.dimension(), what);
  if (!space.chart().contains(x)) throw UsageError(std::string(what) + " lies outside the chart domain");
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) throw UsageError(std::string(what) + " must be positive");
}

// analyze ------------------------------------------------------------------

int cmd_analyze(const Options& opt, Json& report, std::ostream&) {
  require_positive(opt.tol_killing, "--tol-killing");
  require_positive(opt.tol_length, "--tol-length");
  if (opt.probes < 1) throw UsageError("--probes must be >= 1");
  const Loaded loaded = load(opt.spec_path);
  const auto& space = loaded.space;
  const std::uint64_t seed = resolve_seed(opt);
  report = header("analyze", &loaded, opt.spec_path);
  report["seed"] = seed;
  report["tolerances"] = tolerances(opt);

  const ProbeSet probes = make_probes(space.chart(), opt.probes, seed, true);
  const TheoremVerdict verdict =
      theorem_verdict(space, probes, analyze_beta(space, probes), opt.tol_killing, opt.tol_length);
  const BetaAnalysis& a = verdict.analysis;
  const bool berwald = a.parallel_defect_sup <= opt.tol_killing;

  report["probes"] = {{"interior", probes.interior_count},
                      {"corners", static_cast<int>(probes.size()) - probes.interior_count}};
  report["analysis"] = {
      {"killing_defect_sup", a.killing_defect_sup},   {"parallel_defect_sup", a.parallel_defect_sup},
      {"length_min", a.length_min},                   {"length_max", a.length_max},
      {"length_spread", a.length_max - a.length_min}, {"length_gradient_sup", a.length_gradient_sup},
  };
  Json v = {{"admits", verdict.admits},
            {"reason", std::string(to_string(verdict.reason))},
            {"berwald", berwald},
            {"tol_killing", verdict.tol_killing},
            {"tol_length", verdict.tol_length}};
  if (verdict.admits) {
    const auto [lo, hi] = std::ranges::minmax(verdict.bh_density_probe_values);
    v["measure"] = "busemann-hausdorff";
    v["bh_density"] = {{"at_first_probe", verdict.bh_density_probe_values.front()}, {"min", lo}, {"max", hi}};
  }
  report["verdict"] = v;

  Json per = Json::array();
  for (std::size_t q = 0; q < probes.size(); ++q) {
    const auto& x = probes[q].x;
    const auto& b = a.b_cov[q];
    double killing = 0.0, parallel = 0.0;
    for (int i = 0; i < b.rows(); ++i) {
      for (int j = 0; j < b.cols(); ++j) {
        killing = std::max(killing, std::abs(b(i, j) + b(j, i)));
        parallel = std::max(parallel, std::abs(b(i, j)));
      }
    }
    Json e = {{"x", x},
              {"killing_defect", killing},
              {"parallel_defect", parallel},
              {"beta_length", beta_length(space, x)},
              {"length_gradient", length_gradient(space, x)}};
    if (verdict.admits) e["bh_density"] = verdict.bh_density_probe_values[q];
    per.push_back(std::move(e));
  }
  report["per_probe"] = std::move(per);
  return verdict.admits ? kSuccess : kCheckFailed;
}

// s-curvature --------------------------------------------------------------

Measure choose_measure(const Options& opt, const Loaded& loaded) {
  if (opt.measure.empty()) {
    if (auto m = spec_measure(loaded.spec, loaded.space)) return *m;
    return Measure::busemann_hausdorff(loaded.space);
  }
  const auto kind = parse_measure_kind(opt.measure);
  if (!kind) throw UsageError("unknown measure '" + opt.measure + "'");
  if (*kind != MeasureKind::custom) return make_measure(*kind, loaded.space, std::nullopt);
  if (opt.density.empty()) {
    if (loaded.spec.measure && !loaded.spec.measure->density.empty()) {
      return make_measure(*kind, loaded.space, loaded.spec.measure);
    }
    throw UsageError("--measure custom needs --density");
  }
  try {
    return Measure::custom(ScalarField::parse(opt.density, loaded.space.chart().names()));
  } catch (const ParseError& e) {
    throw UsageError(std::string("--density: ") + e.what());
  }
}

int cmd_scurvature(const Options& opt, Json& report, std::ostream& err) {
  require_positive(opt.tol_s, "--tol-s");
  require_positive(opt.h, "--oracle-step");
  if (opt.transport_steps < 1) throw UsageError("--transport-steps must be >= 1");
  if (opt.probes < 1) throw UsageError("--probes must be >= 1");
  const Loaded loaded = load(opt.spec_path);
  const auto& space = loaded.space;
  const Measure measure = choose_measure(opt, loaded);
  const FinslerStructure F = space.finsler();
  const TransportOptions transport{opt.h, opt.transport_steps, true};

  report = header("s-curvature", &loaded, opt.spec_path);
  report["tolerances"] = {{"s", opt.tol_s}, {"oracle_agreement", kOracleTolerance}};
  report["measure"] = {{"kind", std::string(to_string(measure.kind()))}, {"label", measure.label()}};
  if (opt.oracle) report["oracle"] = {{"h", opt.h}, {"steps", opt.transport_steps}, {"richardson", true}};

  int code = kSuccess;
  const auto sample = [&](const std::vector<double>& x, const std::vector<double>& v) {
    Json e = {{"x", x}, {"v", v}};
    const bool zero = coordinate_norm<double>(v) < kZeroVectorThreshold;
    const double s = s_curvature(F, measure, x, v);
    if (!zero) {
      const double trace = nonlinear_connection_trace(F, x, v);
      e["trace_N"] = trace;
      e["density_term"] = measure.log_derivative(x, v);
    }
    e["s_formula"] = s;
    if (opt.oracle) {
      if (zero) {
        e["s_transport"] = 0.0;
      } else {
        try {
          const double t = s_curvature_transport(F, measure, x, v, transport);
          e["s_transport"] = t;
          e["difference"] = std::abs(s - t);
          e["agrees"] = std::abs(s - t) <= kOracleTolerance;
        } catch (const DomainError& ex) {
          e["s_transport"] = nullptr;
          e["oracle_error"] = ex.what();
          err << "warning: " << ex.what() << "\n";
          code = kDomainWarning;
        }
      }
    }
    e["vanishes"] = std::abs(s) <= opt.tol_s;
    return e;
  };

  if (!opt.point.empty() || !opt.vector.empty()) {
    require_inside(space, opt.point, "--point");
    require_dimension(opt.vector, space.dimension(), "--vector");
    report["sample"] = sample(opt.point, opt.vector);
    return code;
  }

  const std::uint64_t seed = resolve_seed(opt);
  report["seed"] = seed;
  const ProbeSet probes = make_probes(space.chart(), opt.probes, seed);
  Json per = Json::array();
  double sup = 0.0;
  for (const auto& p : probes) {
    Json e = sample(p.x, p.v);
    sup = std::max(sup, std::abs(e["s_formula"].get<double>()));
    per.push_back(std::move(e));
  }
  report["summary"] = {{"probes", static_cast<int>(probes.size())}, {"max_abs_s", sup}, {"vanishes", sup <= opt.tol_s}};
  report["per_probe"] = std::move(per);
  return code;
}

// geodesic -----------------------------------------------------------------

int cmd_geodesic(const Options& opt, Json& report, std::ostream& out, std::ostream& err, bool& printed) {
  if (opt.steps < 1) throw UsageError("--steps must be >= 1");
  if (!std::isfinite(opt.time)) throw UsageError("--time must be finite");
  const Loaded loaded = load(opt.spec_path);
  const auto& space = loaded.space;
  require_inside(space, opt.from, "--from");
  require_dimension(opt.dir, space.dimension(), "--dir");
  const FinslerStructure F = space.finsler();
  const GeodesicPath path = geodesic(F, opt.from, opt.dir, opt.time, opt.steps);

  double drift = 0.0;
  const double f0 = path.samples.front().speed;
  for (const auto& s : path.samples) drift = std::max(drift, std::abs(s.speed - f0));

  int code = kSuccess;
  if (path.status != GeodesicPath::Status::completed) {
    err << "warning: geodesic " << (path.status == GeodesicPath::Status::left_domain ? "left the chart" : "blew up")
        << " after t = " << path.exit_time << "; output truncated\n";
    code = kDomainWarning;
  }

  if (opt.csv) {
    const int n = space.dimension();
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",x" << i;
    for (int i = 1; i <= n; ++i) out << ",v" << i;
    out << ",F\n";
    out << std::setprecision(17);
    for (const auto& s : path.samples) {
      out << s.t;
      for (double e : s.x) out << "," << e;
      for (double e : s.v) out << "," << e;
      out << "," << s.speed << "\n";
    }
    printed = true;
    return code;
  }

  report = header("geodesic", &loaded, opt.spec_path);
  report["integrator"] = {{"method", "rk4"}, {"time", opt.time}, {"steps", opt.steps}};
  const char* status = path.status == GeodesicPath::Status::completed     ? "completed"
                       : path.status == GeodesicPath::Status::left_domain ? "left-domain"
                                                                          : "blew-up";
  report["status"] = status;
  if (path.status != GeodesicPath::Status::completed) report["exit_time"] = path.exit_time;
  report["speed"] = {{"initial", f0}, {"max_drift", drift}};
  Json samples = Json::array();
  for (const auto& s : path.samples) samples.push_back({{"t", s.t}, {"x", s.x}, {"v", s.v}, {"F", s.speed}});
  report["samples"] = std::move(samples);
  return code;
}

// validate -----------------------------------------------------------------

int cmd_validate(const Options& opt, Json& report, std::ostream&) {
  if (opt.probes < 1) throw UsageError("--probes must be >= 1");
  if (opt.transport_probes < 0) throw UsageError("--transport-probes must be >= 0");
  if (opt.samples < kMinMonteCarloSamples) {
    throw UsageError("--samples must be at least " + std::to_string(kMinMonteCarloSamples));
  }
  require_positive(opt.tol_killing, "--tol-killing");
  require_positive(opt.tol_length, "--tol-length");
  require_positive(opt.tol_s, "--tol-s");
  const Loaded loaded = load(opt.spec_path);
  ValidationOptions vo;
  vo.probes = opt.probes;
  vo.seed = resolve_seed(opt);
  vo.transport_probes = opt.transport_probes;
  vo.mc_samples = opt.samples;
  vo.tol_killing = opt.tol_killing;
  vo.tol_length = opt.tol_length;
  vo.tol_s = opt.tol_s;
  const ValidationReport result = run_validation(loaded.space, vo);

  report = header("validate", &loaded, opt.spec_path);
  report["seed"] = vo.seed;
  report["tolerances"] = tolerances(opt);
  report["probes"] = opt.probes;
  report["monte_carlo_samples"] = opt.samples;
  Json checks = Json::array();
  int failed = 0;
  for (const auto& c : result.checks) {
    Json e = {{"name", c.name}, {"module", c.module}};
    if (c.applicable) {
      e["measured"] = c.measured;
      e["bound"] = c.bound == ValidationCheck::Bound::at_most ? "<=" : ">=";
    } else {
      e["measured"] = nullptr;
      e["bound"] = "n/a";
    }
    e["tolerance"] = c.tolerance;
    e["probes"] = c.probes;
    e["passed"] = c.passed;
    if (!c.note.empty()) e["note"] = c.note;
    if (!c.passed) ++failed;
    checks.push_back(std::move(e));
  }
  report["checks"] = std::move(checks);
  report["summary"] = {
      {"total", static_cast<int>(result.checks.size())}, {"failed", failed}, {"all_passed", failed == 0}};
  return failed == 0 ? kSuccess : kCheckFailed;
}

// bh -----------------------------------------------------------------------

int cmd_bh(const Options& opt, Json& report, std::ostream&) {
  if (opt.samples < kMinMonteCarloSamples) {
    throw UsageError("--samples must be at least " + std::to_string(kMinMonteCarloSamples) + ", got " +
                     std::to_string(opt.samples));
  }
  if (opt.workers < 1) throw UsageError("--workers must be >= 1");
  const Loaded loaded = load(opt.spec_path);
  const auto& space = loaded.space;
  std::vector<double> x = opt.point;
  if (x.empty()) {
    for (const auto& iv : space.chart().domain()) x.push_back(0.5 * (iv.lo + iv.hi));
  }
  require_inside(space, x, "--point");
  const std::uint64_t seed = resolve_seed(opt);
  const double closed = bh_density_closed_form(space, x);
  const MonteCarloEstimate est = bh_density_monte_carlo(space, x, opt.samples, seed, opt.workers);
  const double tol = std::max(0.01 * closed, 3.0 * est.std_error);
  const bool agrees = std::abs(est.density - closed) <= tol;

  report = header("bh", &loaded, opt.spec_path);
  report["seed"] = seed;
  report["rng"] = "mt19937_64, seed_seq{seed_lo, seed_hi, worker}";
  report["point"] = x;
  report["closed_form"] = closed;
  report["monte_carlo"] = {{"density", est.density},
                           {"std_error", est.std_error},
                           {"ball_volume", est.ball_volume},
                           {"ball_volume_std_error", est.ball_volume_std_error},
                           {"box_half_width", est.box_half_width},
                           {"samples", est.samples},
                           {"hits", est.hits},
                           {"workers", est.workers}};
  report["difference"] = std::abs(est.density - closed);
  report["tolerance"] = tol;
  report["agrees"] = agrees;
  return agrees ? kSuccess : kCheckFailed;
}

// catalog ------------------------------------------------------------------

int cmd_catalog(const Options& opt, std::ostream& out) {
  if (opt.catalog_name.empty()) {
    std::size_t width = 0;
    for (const auto& e : catalog_entries()) width = std::max(width, e.name.size());
    for (const auto& e : catalog_entries()) {
      out << std::left << std::setw(static_cast<int>(width + 2)) << e.name << e.description << "\n";
    }
    return kSuccess;
  }
  try {
    out << to_json_text(catalog_spec(opt.catalog_name));
  } catch (const std::out_of_range&) {
    throw UsageError("unknown catalog space '" + opt.catalog_name + "'");
  }
  return kSuccess;
}

// --------------------------------------------------------------------------

void add_spec(CLI::App* sub, Options& opt) {
  sub->add_option("spec", opt.spec_path, "Manifold spec JSON file, or catalog:<name>")->required();
}

void add_seed(CLI::App* sub, Options& opt) {
  sub->add_option("--seed", opt.seed, "RNG seed (overrides FINSLERLAB_SEED)");
}

void add_probes(CLI::App* sub, Options& opt) {
  sub->add_option("--probes", opt.probes, "Number of interior probes")->capture_default_str();
}

void add_tolerances(CLI::App* sub, Options& opt) {
  sub->add_option("--tol-killing", opt.tol_killing, "Killing defect tolerance")->capture_default_str();
  sub->add_option("--tol-length", opt.tol_length, "Constant length tolerance")->capture_default_str();
  sub->add_option("--tol-s", opt.tol_s, "Vanishing S tolerance")->capture_default_str();
}

void add_timing(CLI::App* sub, Options& opt) {
  sub->add_flag("--timing", opt.timing, "Add wall time to the report (breaks byte-identical output)");
}

CLI::Option* add_vector(CLI::App* sub, const char* name, std::vector<double>& target, const char* help) {
  return sub->add_option(name, target, help)->delimiter(',')->allow_extra_args(false);
}

Json error_object(std::string_view kind, std::string_view message) {
  return {{"error", {{"kind", std::string(kind)}, {"message", std::string(message)}}}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app("Finsler geometry toolkit for Randers spaces", "finslerlab");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  auto* analyze = app.add_subcommand("analyze", "Killing and constant-length test of beta; theorem verdict");
  add_spec(analyze, opt);
  add_probes(analyze, opt);
  add_seed(analyze, opt);
  add_tolerances(analyze, opt);
  add_timing(analyze, opt);

  auto* scurv = app.add_subcommand("s-curvature", "S-curvature at a point or over the probe set");
  add_spec(scurv, opt);
  scurv->add_option("--measure", opt.measure, "lebesgue | riemannian-volume | busemann-hausdorff | bh | custom");
  scurv->add_option("--density", opt.density, "Density expression for --measure custom");
  add_vector(scurv, "--point", opt.point, "Base point, comma separated");
  add_vector(scurv, "--vector", opt.vector, "Tangent vector, comma separated");
  scurv->add_flag("--oracle", opt.oracle, "Also compute S by transporting volume along the geodesic");
  scurv->add_option("--oracle-step", opt.h, "Oracle time step h")->capture_default_str();
  scurv->add_option("--transport-steps", opt.transport_steps, "RK4 steps per oracle path")->capture_default_str();
  add_probes(scurv, opt);
  add_seed(scurv, opt);
  scurv->add_option("--tol-s", opt.tol_s, "Vanishing S tolerance")->capture_default_str();
  add_timing(scurv, opt);

  auto* geo = app.add_subcommand("geodesic", "Integrate a geodesic with fixed-step RK4");
  add_spec(geo, opt);
  add_vector(geo, "--from", opt.from, "Start point, comma separated")->required();
  add_vector(geo, "--dir", opt.dir, "Initial velocity, comma separated")->required();
  geo->add_option("--time", opt.time, "Integration time (may be negative)")->capture_default_str();
  geo->add_option("--steps", opt.steps, "Number of RK4 steps")->capture_default_str();
  geo->add_flag("--csv", opt.csv, "Write samples as CSV: t, x1..xn, v1..vn, F");
  add_timing(geo, opt);

  auto* validate = app.add_subcommand("validate", "Run the full invariant suite");
  add_spec(validate, opt);
  add_probes(validate, opt);
  add_seed(validate, opt);
  add_tolerances(validate, opt);
  validate->add_option("--samples", opt.samples, "Monte-Carlo samples for the density check")->capture_default_str();
  validate->add_option("--transport-probes", opt.transport_probes, "Probes for the transport oracle")
      ->capture_default_str();
  add_timing(validate, opt);

  auto* bh = app.add_subcommand("bh", "Busemann-Hausdorff density: closed form vs Monte-Carlo");
  add_spec(bh, opt);
  add_vector(bh, "--point", opt.point, "Base point (default: centre of the domain)");
  bh->add_option("--samples", opt.samples, "Monte-Carlo samples")->capture_default_str();
  bh->add_option("--workers", opt.workers, "Sampling threads")->capture_default_str();
  add_seed(bh, opt);
  add_timing(bh, opt);

  auto* catalog = app.add_subcommand("catalog", "List built-in spaces, or print one as a spec");
  catalog->add_option("name", opt.catalog_name, "Space to print");

  std::vector<const char*> argv{"finslerlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  Json report;
  bool printed = false;
  const auto start = std::chrono::steady_clock::now();
  int code = kSuccess;
  try {
    if (*catalog) return cmd_catalog(opt, out);
    if (*analyze) code = cmd_analyze(opt, report, err);
    else if (*scurv) code = cmd_scurvature(opt, report, err);
    else if (*geo) code = cmd_geodesic(opt, report, out, err, printed);
    else if (*validate) code = cmd_validate(opt, report, err);
    else if (*bh) code = cmd_bh(opt, report, err);
  } catch (const UsageError& e) {
    out << error_object("usage", e.what()).dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SpecError& e) {
    out << error_object("invalid-spec", e.what()).dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kInvalidSpec;
  } catch (const DomainError& e) {
    out << error_object("domain", e.what()).dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kDomainWarning;
  } catch (const std::invalid_argument& e) {
    out << error_object("usage", e.what()).dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    out << error_object("invalid-spec", e.what()).dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kInvalidSpec;
  }
  if (printed) return code;
  if (opt.timing) {
    report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  out << report.dump(2) << "\n";
  return code;
}

}  // namespace finslerlab::cli
