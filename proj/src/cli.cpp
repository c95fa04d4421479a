#include "sqg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqg/curvature.hpp"
#include "sqg/errors.hpp"
#include "sqg/field_io.hpp"
#include "sqg/lagrangian_flow.hpp"
#include "sqg/parallel.hpp"
#include "sqg/presets.hpp"
#include "sqg/riesz.hpp"
#include "sqg/sphere_jacobi.hpp"
#include "sqg/verify.hpp"

extern char** environ;

namespace sqg::cli {

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render(const Table& t, const json& config, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    json j;
    j["config"] = config;
    j["rows"] = json::array();
    for (const auto& row : t.rows) {
      json r;
      for (std::size_t c = 0; c < row.size(); ++c) {
        std::visit([&](const auto& v) { r[t.header[c]] = v; }, row[c]);
      }
      j["rows"].push_back(std::move(r));
    }
    os << j.dump(2) << '\n';
    return os.str();
  }
  os << "# config: " << config.dump() << '\n';
  for (std::size_t c = 0; c < t.header.size(); ++c) os << (c ? "," : "") << t.header[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      if (const auto* i = std::get_if<long long>(&row[c])) {
        os << *i;
      } else if (const auto* d = std::get_if<double>(&row[c])) {
        os << format_double(*d);
      } else {
        os << std::get<std::string>(row[c]);
      }
    }
    os << '\n';
  }
  return os.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << text;
}

std::string env_name(const std::string& flag) {
  std::string s = "SQG_";
  for (char c : flag) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

struct Params {
  // shared
  std::string output = "-";
  std::string format = "csv";
  int threads = 1;
  // curvature / conjugate
  std::string family = "negative";
  int n_max = 10;
  std::string symbol = "sqrt_laplacian";
  std::string method = "closed_form";
  // jacobi-ode
  int n = 2;
  int m = 1;
  double c_re = 1.0;
  double c_im = 0.0;
  // planar flow; t_end and dt are shared with jacobi-ode
  double t_end = -1.0;
  double dt = -1.0;
  std::string theta0 = "gaussian";
  std::string theta0_file;
  double amplitude = std::numeric_limits<double>::quiet_NaN();
  double angle = 0.0;
  double L = 4.0;
  double h = 0.0;
  int cells = 64;
  double gamma = 0.5;
  int stride = 8;
  int node_stride = 8;
  std::string field_output;
  std::string report_output;
  // verify
  std::string suite = "all";
};

class Registry {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& flag, T& var, const std::string& help) {
    const std::string env = env_name(flag);
    known_.insert(env);
    return app->add_option("--" + flag, var, help)->envname(env);
  }
  void add_env(const std::string& env) { known_.insert(env); }
  const std::set<std::string>& known() const { return known_; }

 private:
  std::set<std::string> known_;
};

void reject_unknown_env(const Registry& reg) {
  for (char** e = environ; e && *e; ++e) {
    const std::string kv = *e;
    if (kv.rfind("SQG_", 0) != 0) continue;
    const std::string key = kv.substr(0, kv.find('='));
    if (!reg.known().count(key)) {
      throw ValidationError("unknown environment override '" + key + "'");
    }
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

// ---- curvature ------------------------------------------------------------

int run_curvature(const Params& p, std::ostream& out) {
  require(p.n_max >= 1 && p.n_max <= 100000, "--n-max must be in [1, 100000]");
  const curvature::Family fam = curvature::parse_family(p.family);
  const curvature::Method method = curvature::parse_method(p.method);
  const spectral::MetricSymbol F = spectral::MetricSymbol::parse(p.symbol);
  json cfg;
  cfg["subcommand"] = "curvature";
  cfg["family"] = curvature::to_string(fam);
  cfg["n_max"] = p.n_max;
  cfg["symbol"] = F.label();
  cfg["method"] = curvature::to_string(method);
  cfg["format"] = p.format;
  Table t{{"n", "K", "K_over_n3", "method"}, {}};
  for (const auto& row : curvature::curvature_scan(fam, p.n_max, F, method)) {
    t.rows.push_back({static_cast<long long>(row.n), row.k, row.k_over_n3, curvature::to_string(row.method)});
  }
  emit(render(t, cfg, p.format), p.output, out);
  return kExitOk;
}

// ---- sphere ---------------------------------------------------------------

int run_conjugate(const Params& p, std::ostream& out) {
  require(p.n_max >= 2 && p.n_max <= 10000000, "--n-max must be in [2, 1e7]");
  json cfg;
  cfg["subcommand"] = "conjugate";
  cfg["n_max"] = p.n_max;
  cfg["limit"] = sphere::kClusterLimit;
  cfg["format"] = p.format;
  Table t{{"n", "m", "t_nm", "gap_to_limit"}, {}};
  for (const auto& row : sphere::cluster_scan(p.n_max)) {
    t.rows.push_back({static_cast<long long>(row.n), static_cast<long long>(row.n), row.t_nn, row.gap});
  }
  emit(render(t, cfg, p.format), p.output, out);
  return kExitOk;
}

int run_jacobi_ode(const Params& p, std::ostream& out) {
  const double t_end = p.t_end < 0.0 ? 10.0 : p.t_end;
  const double dt = p.dt < 0.0 ? 0.01 : p.dt;
  require(p.n >= 1, "--n must be >= 1");
  require(std::abs(p.m) <= p.n, "--m must satisfy |m| <= n");
  require(t_end > 0.0 && std::isfinite(t_end), "--t-end must be > 0");
  require(dt > 0.0 && std::isfinite(dt), "--dt must be > 0");
  require(p.stride >= 1, "--stride must be >= 1");
  require(std::isfinite(p.c_re) && std::isfinite(p.c_im), "--c-re/--c-im must be finite");
  const sphere::JacobiTrajectory tr =
      sphere::integrate_jacobi_ode(p.n, p.m, {p.c_re, p.c_im}, t_end, dt);
  json cfg;
  cfg["subcommand"] = "jacobi-ode";
  cfg["n"] = p.n;
  cfg["m"] = p.m;
  cfg["c_re"] = p.c_re;
  cfg["c_im"] = p.c_im;
  cfg["t_end"] = t_end;
  cfg["dt"] = dt;
  cfg["stride"] = p.stride;
  cfg["format"] = p.format;
  Table t{{"t", "re_h", "im_h", "re_g", "im_g", "abs_g"}, {}};
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    if (i % static_cast<std::size_t>(p.stride) != 0 && i + 1 != tr.t.size()) continue;
    t.rows.push_back({tr.t[i], tr.h[i].real(), tr.h[i].imag(), tr.g[i].real(), tr.g[i].imag(),
                      std::abs(tr.g[i])});
  }
  emit(render(t, cfg, p.format), p.output, out);
  return kExitOk;
}

// ---- planar flow ----------------------------------------------------------

json membership_json(const lagrangian::MembershipReport& r) {
  json j;
  j["inf_det"] = r.inf_det;
  j["holder_norm"] = r.holder_norm;
  j["in_O"] = r.in_O;
  j["chord_arc_lambda"] = r.chord_arc_lambda;
  j["grad_inv_bound"] = r.grad_inv_bound;
  j["holder_parts"] = {{"sup", r.parts.sup}, {"sup_grad", r.parts.sup_grad}, {"seminorm", r.parts.seminorm}};
  j["failed"] = r.failed;
  return j;
}

struct FlowSetup {
  lagrangian::ScalarField2D theta0;
  json config;
};

FlowSetup flow_setup(const Params& p, const std::string& sub, double t_end, double dt) {
  using namespace lagrangian;
  require(p.gamma > 0.0 && p.gamma < 1.0, "--gamma must be in (0, 1)");
  require(dt > 0.0 && std::isfinite(dt), "--dt must be > 0");
  require(t_end > 0.0 && std::isfinite(t_end), "--t-end must be > 0");
  require(p.stride >= 1, "--stride must be >= 1");
  require(p.node_stride >= 1, "--node-stride must be >= 1");
  FlowSetup s;
  json cfg;
  cfg["subcommand"] = sub;
  if (!p.theta0_file.empty()) {
    s.theta0 = read_scalar(p.theta0_file);
    s.theta0.gamma = p.gamma;
    cfg["theta0_file"] = p.theta0_file;
  } else {
    require(p.L > 0.0 && std::isfinite(p.L), "--L must be > 0");
    const Grid2D g = p.h > 0.0 ? Grid2D::from_spacing(p.L, p.h) : Grid2D(p.L, p.cells);
    PresetSpec spec = make_preset(parse_preset(p.theta0));
    if (!std::isnan(p.amplitude)) spec.amplitude = p.amplitude;
    require(std::isfinite(spec.amplitude), "--amplitude must be finite");
    spec.angle = p.angle;
    s.theta0 = sample(spec, g, p.gamma);
    cfg["theta0"] = to_string(spec.kind);
    cfg["amplitude"] = spec.amplitude;
    cfg["angle"] = spec.angle;
  }
  check_decay(s.theta0);
  cfg["L"] = s.theta0.grid.L;
  cfg["h"] = s.theta0.grid.h();
  cfg["cells"] = s.theta0.grid.m;
  cfg["gamma"] = p.gamma;
  cfg["dt"] = dt;
  cfg["t_end"] = t_end;
  cfg["stride"] = p.stride;
  cfg["node_stride"] = p.node_stride;
  cfg["format"] = p.format;
  s.config = std::move(cfg);
  return s;
}

void trajectory_rows(Table& t, double time, const lagrangian::FlowMap& X, int node_stride) {
  const auto& g = X.grid;
  for (int j = 0; j < g.n(); j += node_stride) {
    for (int i = 0; i < g.n(); i += node_stride) {
      const lagrangian::Vec2 x = X.X(g.index(i, j));
      t.rows.push_back({time, static_cast<long long>(i), static_cast<long long>(j), x[0], x[1]});
    }
  }
}

int run_flow(const Params& p, bool expmap, std::ostream& out) {
  using namespace lagrangian;
  const double t_end = expmap ? 1.0 : (p.t_end < 0.0 ? 1.0 : p.t_end);
  const double dt = p.dt < 0.0 ? 1.0 / 64.0 : p.dt;
  if (expmap) require(p.t_end < 0.0 || p.t_end == 1.0, "expmap always integrates to t = 1");
  const FlowSetup s = flow_setup(p, expmap ? "expmap" : "evolve", t_end, dt);

  EvolveOptions opt;
  opt.t_end = t_end;
  opt.dt = dt;
  opt.snapshot_stride = expmap ? 0 : p.stride;
  const EvolveResult r = evolve(s.theta0, opt);
  if (expmap && r.halted) {
    const auto& failed = r.steps.back().report.failed;
    throw MembershipError(failed.empty() ? "membership" : failed.front(), "expmap: " + r.halt_reason);
  }

  Table t{{"t", "node_i", "node_j", "x1", "x2"}, {}};
  if (expmap) {
    trajectory_rows(t, r.t, r.X, p.node_stride);
  } else {
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
      trajectory_rows(t, r.snapshot_times[k], r.snapshots[k], p.node_stride);
    }
  }
  emit(render(t, s.config, p.format), p.output, out);

  if (!p.field_output.empty()) write_flowmap(p.field_output, r.X, s.config);
  if (!p.report_output.empty()) {
    json rep;
    rep["config"] = s.config;
    rep["t"] = r.t;
    rep["halted"] = r.halted;
    rep["halt_reason"] = r.halt_reason;
    rep["steps"] = r.steps.size();
    rep["energy0"] = r.energy0;
    rep["energy1"] = r.energy1;
    rep["energy_rel_drift"] = (r.energy1 - r.energy0) / (r.energy0 != 0.0 ? std::abs(r.energy0) : 1.0);
    rep["max_jac_dev"] = r.max_jac_dev;
    rep["max_chord_arc"] = r.max_chord_arc;
    rep["membership"] = r.steps.empty() ? json() : membership_json(r.steps.back().report);
    emit(rep.dump(2) + "\n", p.report_output, out);
  }
  if (r.halted) throw MembershipError(r.steps.back().report.failed.front(), r.halt_reason);
  return kExitOk;
}

// ---- verify ---------------------------------------------------------------

int run_verify(const Params& p, std::ostream& out) {
  const verify::Report r = verify::run_suite(p.suite);
  json cfg;
  cfg["subcommand"] = "verify";
  cfg["suite"] = p.suite;
  emit(r.to_json(cfg).dump(2) + "\n", p.output, out);
  return r.pass() ? kExitOk : kExitVerify;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Params p;
  Registry reg;
  CLI::App app{"Geometry of the SQG equation: curvature scans, conjugate points, planar flow maps"};
  app.name("sqg_geom");
  app.require_subcommand(1, 1);
  app.fallthrough();

  reg.add(&app, "output", p.output, "Output path for the main table or report ('-' = stdout)");
  reg.add(&app, "format", p.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  reg.add(&app, "threads", p.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1, 1024));

  auto* curv = app.add_subcommand("curvature", "Normalized sectional curvature along a mode family");
  reg.add(curv, "family", p.family, "negative | positive");
  reg.add(curv, "n-max", p.n_max, "Largest mode multiplier n");
  reg.add(curv, "symbol", p.symbol, "sqrt_laplacian | sobolev:<s> | constant:<c>");
  reg.add(curv, "method", p.method, "closed_form | arnold_oracle");

  auto* conj = app.add_subcommand("conjugate", "Conjugate times t_nn along the rotation on the sphere");
  reg.add(conj, "n-max", p.n_max, "Largest degree n");

  auto* jode = app.add_subcommand("jacobi-ode", "RK4 trajectory of one Jacobi mode (h, g)");
  reg.add(jode, "n", p.n, "Degree n >= 1");
  reg.add(jode, "m", p.m, "Order m, |m| <= n");
  reg.add(jode, "c-re", p.c_re, "Re C");
  reg.add(jode, "c-im", p.c_im, "Im C");
  reg.add(jode, "t-end", p.t_end, "Final time (default 10)");
  reg.add(jode, "dt", p.dt, "Step (default 0.01)");
  reg.add(jode, "stride", p.stride, "Keep every k-th sample");

  auto add_flow = [&](CLI::App* sub, bool with_t_end) {
    sub->set_help_flag("--help", "Print this help message and exit");
    reg.add(sub, "theta0", p.theta0, "zero | gaussian | gaussian-pair");
    reg.add(sub, "theta0-file", p.theta0_file, "Scalar field file used instead of a preset");
    reg.add(sub, "amplitude", p.amplitude, "Preset amplitude (default per preset)");
    reg.add(sub, "angle", p.angle, "gaussian-pair axis angle");
    reg.add(sub, "L", p.L, "Box half-width");
    reg.add(sub, "h", p.h, "Grid spacing (must divide L); overrides --cells");
    reg.add(sub, "cells", p.cells, "Cells per half side (h = L/cells)");
    reg.add(sub, "gamma", p.gamma, "Hölder exponent in (0,1)");
    reg.add(sub, "dt", p.dt, "RK4 step (default 1/64)");
    if (with_t_end) reg.add(sub, "t-end", p.t_end, "Final time (default 1)");
    reg.add(sub, "stride", p.stride, "Trajectory output every k-th step");
    reg.add(sub, "node-stride", p.node_stride, "Trajectory output every k-th node per axis");
    reg.add(sub, "field-output", p.field_output, "Binary file for the final flow map");
    reg.add(sub, "report-output", p.report_output, "JSON run and membership report");
  };
  auto* evo = app.add_subcommand("evolve", "Lagrangian flow map of planar SQG by RK4");
  add_flow(evo, true);
  auto* expm = app.add_subcommand("expmap", "Time-1 flow map (exponential map) of planar SQG");
  add_flow(expm, false);

  auto* ver = app.add_subcommand("verify", "Run invariant suites and emit a JSON report");
  ver->add_option("suite", p.suite, "spectral | curvature | jacobi | lagrangian | all")
      ->envname("SQG_SUITE")
      ->check(CLI::IsMember(verify::suite_names()));
  reg.add_env("SQG_SUITE");

  try {
    reject_unknown_env(reg);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    set_threads(p.threads);
    if (curv->parsed()) return run_curvature(p, out);
    if (conj->parsed()) return run_conjugate(p, out);
    if (jode->parsed()) return run_jacobi_ode(p, out);
    if (evo->parsed()) return run_flow(p, false, out);
    if (expm->parsed()) return run_flow(p, true, out);
    if (ver->parsed()) return run_verify(p, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalDomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitValidation;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sqg::cli
