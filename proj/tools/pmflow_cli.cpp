// pmflow: spectral Navier-Stokes experiments from JSON configs.
//
// Subcommands: solve-cauchy | solve-stationary | landau | verify-norms |
// rate-farfield | rate-stability | rate-convergence | riesz.
// Every run validates its configuration against the subcommand's schema
// before any computation, executes, writes PMNS/CSV/JSON artifacts under the
// output directory, and prints a one-line summary. Exit 0 on pass, 2 on a
// failed experiment, 1 on usage or configuration errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmflow/asymptotics.hpp"
#include "pmflow/detail/rng.hpp"
#include "pmflow/io.hpp"
#include "pmflow/landau.hpp"
#include "pmflow/operators.hpp"
#include "pmflow/solver.hpp"
#include "pmflow/version.hpp"

namespace {

using nlohmann::json;
using namespace pmflow;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw ConfigError(path.empty() ? what : path + ": " + what);
}

// Path-tracking view over a json object: every access error names the full
// key path of the offending entry.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *j_; }

  bool has(const std::string& key) const {
    return j_->is_object() && j_->contains(key);
  }

  Node child(const std::string& key) const {
    require_object();
    if (!j_->contains(key)) fail_at(join(key), "missing required key");
    return Node((*j_)[key], join(key));
  }

  // Rejects keys outside the schema for this block (catches typos early).
  void allow(std::initializer_list<const char*> keys) const {
    require_object();
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      bool ok = false;
      for (const char* k : keys) ok = ok || it.key() == k;
      if (!ok) fail_at(join(it.key()), "unknown key");
    }
  }

  double num(const std::string& key) const {
    Node c = child(key);
    if (!c.j_->is_number()) fail_at(c.path_, "expected a number");
    return c.j_->get<double>();
  }
  double num_or(const std::string& key, double dflt) const {
    return has(key) ? num(key) : dflt;
  }

  int integer(const std::string& key) const {
    Node c = child(key);
    if (!c.j_->is_number_integer()) fail_at(c.path_, "expected an integer");
    return c.j_->get<int>();
  }
  int integer_or(const std::string& key, int dflt) const {
    return has(key) ? integer(key) : dflt;
  }

  std::string str(const std::string& key) const {
    Node c = child(key);
    if (!c.j_->is_string()) fail_at(c.path_, "expected a string");
    return c.j_->get<std::string>();
  }
  std::string str_or(const std::string& key, const std::string& dflt) const {
    return has(key) ? str(key) : dflt;
  }

  std::vector<double> numbers(const std::string& key) const {
    Node c = child(key);
    if (!c.j_->is_array()) fail_at(c.path_, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : *c.j_) {
      if (!v.is_number()) fail_at(c.path_, "expected an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  std::array<double, 3> vec3(const std::string& key) const {
    const std::vector<double> v = numbers(key);
    if (v.size() != 3) fail_at(join(key), "expected exactly 3 components");
    return {v[0], v[1], v[2]};
  }
  std::array<double, 3> vec3_or(const std::string& key,
                                std::array<double, 3> dflt) const {
    return has(key) ? vec3(key) : dflt;
  }

  std::size_t array_size(const std::string& key) const {
    Node c = child(key);
    if (!c.j_->is_array()) fail_at(c.path_, "expected an array");
    return c.j_->size();
  }
  Node element(const std::string& key, std::size_t i) const {
    Node c = child(key);
    return Node((*c.j_)[i], c.path_ + "[" + std::to_string(i) + "]");
  }

 private:
  void require_object() const {
    if (!j_->is_object()) fail_at(path_, "expected an object");
  }
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* j_;
  std::string path_;
};

// ---------------------------------------------------------------------------
// Config -> core types.

GridSpec parse_grid(const Node& n) {
  n.allow({"n", "box_length", "dealias_fraction"});
  GridSpec g{n.integer("n"), n.num("box_length"),
             n.num_or("dealias_fraction", 2.0 / 3.0)};
  try {
    g.validate();
  } catch (const std::exception& e) {
    fail_at(n.path(), e.what());
  }
  return g;
}

TimeGrid parse_time(const Node& n) {
  n.allow({"t_min", "t_max", "ratio"});
  try {
    return TimeGrid::geometric(n.num("t_min"), n.num("t_max"), n.num("ratio"));
  } catch (const std::exception& e) {
    fail_at(n.path(), e.what());
  }
}

NormBand parse_band(const Node& n, const GridSpec& g) {
  n.allow({"xi_min", "xi_max"});
  NormBand band{n.num("xi_min"), n.num("xi_max")};
  try {
    band.validate(g);
  } catch (const std::exception& e) {
    fail_at(n.path(), e.what());
  }
  return band;
}

TrajectorySpec parse_trajectory(const Node& n) {
  n.allow({"kind", "velocity"});
  TrajectorySpec t;
  const std::string kind = n.str_or("kind", "fixed");
  if (kind == "fixed")
    t.kind = TrajectorySpec::Kind::fixed;
  else if (kind == "sqrt_drift")
    t.kind = TrajectorySpec::Kind::sqrt_drift;
  else if (kind == "linear_drift")
    t.kind = TrajectorySpec::Kind::linear_drift;
  else
    fail_at(n.path() + ".kind", "expected fixed | sqrt_drift | linear_drift");
  t.velocity = n.vec3_or("velocity", {0.0, 0.0, 0.0});
  return t;
}

ForceSpec parse_force(const Node& n);

ForceSpec parse_force_kind(const Node& n, const std::string& kind) {
  if (kind == "dirac") {
    n.allow({"kind", "amplitude"});
    return ForceSpec{DiracForce{n.vec3("amplitude")}};
  }
  if (kind == "moving_dirac") {
    n.allow({"kind", "amplitude", "trajectory"});
    MovingDiracForce f;
    f.amplitude = n.vec3("amplitude");
    if (n.has("trajectory")) f.trajectory = parse_trajectory(n.child("trajectory"));
    return ForceSpec{f};
  }
  if (kind == "log_line") {
    n.allow({"kind", "b", "c"});
    return ForceSpec{LogLineForce{n.num_or("b", 0.0), n.num_or("c", 0.0)}};
  }
  if (kind == "moment") {
    n.allow({"kind", "direction", "terms"});
    IntegrableMomentForce f;
    f.direction = n.vec3_or("direction", {1.0, 0.0, 0.0});
    const std::size_t m = n.array_size("terms");
    for (std::size_t i = 0; i < m; ++i) {
      const Node t = n.element("terms", i);
      t.allow({"a", "center", "sigma"});
      f.terms.push_back(
          {t.num("a"), t.vec3_or("center", {0.0, 0.0, 0.0}), t.num("sigma")});
    }
    return ForceSpec{f};
  }
  if (kind == "composite") {
    n.allow({"kind", "terms"});
    CompositeForce f;
    const std::size_t m = n.array_size("terms");
    for (std::size_t i = 0; i < m; ++i) {
      const Node t = n.element("terms", i);
      t.allow({"coeff", "force"});
      f.terms.emplace_back(t.num("coeff"), parse_force(t.child("force")));
    }
    return ForceSpec{f};
  }
  fail_at(n.path() + ".kind",
          "expected dirac | moving_dirac | log_line | moment | composite | "
          "gaussian_symbol");
}

// Band-limited force with a Gaussian symbol envelope:
// f_hat = amplitude * exp(-width |xi|^2), optionally heat/power modulated.
ForceSpec parse_gaussian_symbol_force(const Node& n, const GridSpec& g) {
  n.allow({"kind", "amplitude", "width", "modulation", "power_exponent"});
  const std::array<double, 3> amp = n.vec3("amplitude");
  const double width = n.num_or("width", 0.25);
  auto sym = std::make_shared<FourierVectorField>(FourierVectorField::zeros(g));
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const double s2 = g.xi_norm_sq(idx);
    const double env = std::exp(-width * s2);
    for (int c = 0; c < 3; ++c) sym->c[c][idx] = amp[std::size_t(c)] * env;
  }
  BandLimitedForce f;
  f.symbol = std::move(sym);
  const std::string mod = n.str_or("modulation", "constant");
  if (mod == "constant")
    f.modulation = BandLimitedForce::Modulation::constant;
  else if (mod == "heat")
    f.modulation = BandLimitedForce::Modulation::heat;
  else if (mod == "power")
    f.modulation = BandLimitedForce::Modulation::power;
  else
    fail_at(n.path() + ".modulation", "expected constant | heat | power");
  f.power_exponent = n.num_or("power_exponent", 0.0);
  return ForceSpec{f};
}

ForceSpec parse_force(const Node& n) {
  return parse_force_kind(n, n.str("kind"));
}

// gaussian_symbol needs the grid, so force parsing at command level routes
// through here.
ForceSpec parse_force(const Node& n, const GridSpec& g) {
  const std::string kind = n.str("kind");
  if (kind == "gaussian_symbol") return parse_gaussian_symbol_force(n, g);
  return parse_force_kind(n, kind);
}

// Deterministic divergence-free random field supported on an integer-radius
// shell, Hermitian-symmetric (mode phases keyed by a per-mode hash), scaled
// to the requested PM^2 size.
FourierVectorField random_band_datum(const GridSpec& g, int k2_min, int k2_max,
                                     double amplitude, std::uint64_t seed) {
  FourierVectorField u = FourierVectorField::zeros(g);
  const int half = g.n / 2;
  for (int k1 = -half; k1 < half; ++k1)
    for (int k2 = -half; k2 < half; ++k2)
      for (int k3 = -half; k3 < half; ++k3) {
        const int r2 = k1 * k1 + k2 * k2 + k3 * k3;
        if (r2 < k2_min || r2 > k2_max) continue;
        // Fill only the canonical half-space; mirror the conjugate, skipping
        // self-conjugate modes (those need real values and -k may not exist
        // on the even grid anyway).
        const bool canonical =
            k3 > 0 || (k3 == 0 && (k2 > 0 || (k2 == 0 && k1 > 0)));
        if (!canonical) continue;
        if (-k1 == half || -k2 == half || -k3 == half) continue;
        int kk[3] = {k1, k2, k3};
        detail::Rng rng(detail::fnv1a(kk, sizeof kk, seed));
        const std::size_t idx =
            g.index(g.k_to_index(k1), g.k_to_index(k2), g.k_to_index(k3));
        const std::size_t midx =
            g.index(g.k_to_index(-k1), g.k_to_index(-k2), g.k_to_index(-k3));
        for (int c = 0; c < 3; ++c) {
          const cplx v(rng.normal(), rng.normal());
          u.c[c][idx] = v;
          u.c[c][midx] = std::conj(v);
        }
      }
  dealias(u);
  u = leray_project(std::move(u));
  const double norm = pm_norm(u, 2.0, NormBand::default_for(g));
  if (!(norm > 0.0))
    throw ConfigError("datum: the random band produced an empty field");
  const double scale = amplitude / norm;
  for (int c = 0; c < 3; ++c)
    for (auto& v : u.c[c]) v *= scale;
  return u;
}

FourierVectorField parse_datum(const Node& n, const GridSpec& g) {
  const std::string kind = n.str("kind");
  if (kind == "zero") {
    n.allow({"kind"});
    return FourierVectorField::zeros(g);
  }
  if (kind == "homogeneous") {
    n.allow({"kind", "eps", "axis"});
    return make_selfsimilar_datum(g, n.num("eps"), n.integer_or("axis", 0));
  }
  if (kind == "band_limited") {
    n.allow({"kind", "k2_min", "k2_max", "amplitude", "seed"});
    return random_band_datum(g, n.integer_or("k2_min", 1),
                             n.integer_or("k2_max", 16), n.num("amplitude"),
                             std::uint64_t(n.integer_or("seed", 1)));
  }
  if (kind == "file") {
    n.allow({"kind", "path"});
    FourierVectorField u = load_pmns(n.str("path"));
    if (!(u.grid == g))
      fail_at(n.path() + ".path", "field grid does not match config grid");
    return u;
  }
  fail_at(n.path() + ".kind",
          "expected zero | homogeneous | band_limited | file");
}

SolveOptions parse_solver(const Node& parent, const GridSpec& g) {
  SolveOptions opt;
  if (parent.has("solver")) {
    const Node n = parent.child("solver");
    n.allow({"tol", "max_iterations", "force_path"});
    opt.tol = n.num_or("tol", opt.tol);
    opt.max_iterations = n.integer_or("max_iterations", opt.max_iterations);
    const std::string path = n.str_or("force_path", "automatic");
    if (path == "automatic")
      opt.force_path = DuhamelPath::automatic;
    else if (path == "closed_form")
      opt.force_path = DuhamelPath::closed_form;
    else if (path == "quadrature")
      opt.force_path = DuhamelPath::quadrature;
    else
      fail_at(n.path() + ".force_path",
              "expected automatic | closed_form | quadrature");
  }
  if (parent.has("band")) opt.band = parse_band(parent.child("band"), g);
  return opt;
}

RegionSpec parse_region(const Node& n) {
  n.allow({"r0", "r1", "scale", "center"});
  RegionSpec r;
  r.r0 = n.num("r0");
  r.r1 = n.num("r1");
  const std::string scale = n.str_or("scale", "fixed");
  if (scale == "fixed")
    r.scale = RegionSpec::Scale::fixed;
  else if (scale == "sqrt_t")
    r.scale = RegionSpec::Scale::sqrt_t;
  else
    fail_at(n.path() + ".scale", "expected fixed | sqrt_t");
  if (n.has("center")) r.center = n.vec3("center");
  return r;
}

FitWindow parse_window(const Node& parent) {
  FitWindow w;
  if (parent.has("window")) {
    const Node n = parent.child("window");
    n.allow({"t_lo", "t_hi"});
    w.t_lo = n.num_or("t_lo", w.t_lo);
    w.t_hi = n.num_or("t_hi", w.t_hi);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Output plumbing.

struct Out {
  std::filesystem::path dir;
  std::string prefix;
  std::uint64_t hash = 0;

  std::string path(const std::string& name) const {
    return (dir / (prefix + "_" + name)).string();
  }
  void text(const std::string& name, const std::string& content) const {
    write_text_atomic(path(name), content);
  }
};

Out make_out(const Node& cfg, const std::string& prefix) {
  Out out;
  out.dir = cfg.str_or("out", "pmflow_out");
  out.prefix = prefix;
  out.hash = config_hash(cfg.raw().dump());
  std::error_code ec;
  std::filesystem::create_directories(out.dir, ec);
  if (ec) throw std::runtime_error("cannot create output dir: " + out.dir.string());
  // The resolved configuration itself is an artifact: reruns are exact.
  json j{{"format_version", format_version},
         {"config_hash", hash_hex(out.hash)},
         {"config", cfg.raw()}};
  out.text("config.json", j.dump(2) + "\n");
  return out;
}

json certificate_to_json(const PicardCertificate& c) {
  return json::parse(certificate_json(c, 0))["certificate"];
}

CsvTable norm_history_table(const SpaceTimeField& u, const NormBand& band) {
  CsvTable t;
  t.columns = {"t", "pm2"};
  for (std::size_t m = 0; m < u.times.nodes.size(); ++m)
    t.rows.push_back({u.times.nodes[m], pm_norm(u.snaps[m], 2.0, band)});
  return t;
}

// ---------------------------------------------------------------------------
// Subcommand runners. Each returns the process exit code.

int run_solve_cauchy(const Node& cfg) {
  cfg.allow({"grid", "time", "force", "datum", "solver", "band",
             "self_similarity", "out"});
  const GridSpec grid = parse_grid(cfg.child("grid"));
  const TimeGrid times = parse_time(cfg.child("time"));
  const ForceSpec force = parse_force(cfg.child("force"), grid);
  const FourierVectorField u0 =
      cfg.has("datum") ? parse_datum(cfg.child("datum"), grid)
                       : FourierVectorField::zeros(grid);
  const SolveOptions opt = parse_solver(cfg, grid);
  const Out out = make_out(cfg, "cauchy");

  bool pass = true;
  json summary;
  try {
    const CauchySolution sol = solve_cauchy(u0, force, grid, times, opt);
    pass = sol.certificate.converged && sol.certificate.smallness_ok;
    out.text("certificate.json", certificate_json(sol.certificate, out.hash));
    out.text("norms.csv", to_csv(norm_history_table(sol.u, sol.band), out.hash));
    save_pmns(out.path("final.pmns"), sol.u.snaps.back());
    summary["xa2"] = sol.xa2;
    summary["certificate"] = certificate_to_json(sol.certificate);
    if (cfg.has("self_similarity")) {
      const Node ss = cfg.child("self_similarity");
      ss.allow({"k2_min", "k2_max", "max_rel"});
      const SelfSimilarityReport rep = self_similarity_check(
          sol.u, ss.integer_or("k2_min", 4), ss.integer_or("k2_max", 100));
      out.text("self_similarity.json", self_similarity_json(rep, out.hash));
      summary["self_similarity_worst"] = rep.worst;
      if (ss.has("max_rel") && rep.worst > ss.num("max_rel")) pass = false;
    }
  } catch (const PicardError& e) {
    out.text("certificate.json", certificate_json(e.certificate, out.hash));
    summary["error"] = e.what();
    pass = false;
  }
  summary["pass"] = pass;
  summary["format_version"] = format_version;
  summary["config_hash"] = hash_hex(out.hash);
  out.text("summary.json", summary.dump(2) + "\n");
  std::cout << "solve-cauchy: " << (pass ? "pass" : "FAIL")
            << (summary.contains("xa2")
                    ? " xa2=" + std::to_string(double(summary["xa2"]))
                    : std::string())
            << " -> " << out.dir.string() << "\n";
  return pass ? 0 : 2;
}

int run_solve_stationary(const Node& cfg) {
  cfg.allow({"grid", "force", "solver", "band", "out"});
  const GridSpec grid = parse_grid(cfg.child("grid"));
  const ForceSpec force = parse_force(cfg.child("force"), grid);
  const SolveOptions opt = parse_solver(cfg, grid);
  const Out out = make_out(cfg, "stationary");

  bool pass = true;
  json summary;
  try {
    const StationarySolution sol = solve_stationary(force, grid, opt);
    pass = sol.certificate.converged && sol.certificate.smallness_ok;
    out.text("certificate.json", certificate_json(sol.certificate, out.hash));
    save_pmns(out.path("field.pmns"), sol.w);
    summary["pm2"] = sol.pm2;
    summary["certificate"] = certificate_to_json(sol.certificate);
  } catch (const PicardError& e) {
    out.text("certificate.json", certificate_json(e.certificate, out.hash));
    summary["error"] = e.what();
    pass = false;
  }
  summary["pass"] = pass;
  summary["format_version"] = format_version;
  summary["config_hash"] = hash_hex(out.hash);
  out.text("summary.json", summary.dump(2) + "\n");
  std::cout << "solve-stationary: " << (pass ? "pass" : "FAIL") << " -> "
            << out.dir.string() << "\n";
  return pass ? 0 : 2;
}

int run_landau(const Node& cfg) {
  cfg.allow({"c", "beta1", "annulus", "grid", "h_values", "out"});
  LandauParams params{};
  if (cfg.has("c") == cfg.has("beta1"))
    fail_at("", "landau: exactly one of c | beta1 is required");
  params.c = cfg.has("c") ? cfg.num("c") : landau_c_from_beta(cfg.num("beta1"));
  try {
    params.validate();
  } catch (const std::exception& e) {
    fail_at("c", e.what());
  }

  double r0 = 0.5, r1 = 2.0;
  if (cfg.has("annulus")) {
    const std::vector<double> ann = cfg.numbers("annulus");
    if (ann.size() != 2 || !(ann[0] > 0.0) || !(ann[1] > ann[0]))
      fail_at("annulus", "expected [r0, r1] with 0 < r0 < r1");
    r0 = ann[0];
    r1 = ann[1];
  }
  const GridSpec grid = cfg.has("grid")
                            ? parse_grid(cfg.child("grid"))
                            : GridSpec{64, 16.0, 2.0 / 3.0};
  std::vector<double> hs{1.6e-2, 8e-3, 4e-3};
  if (cfg.has("h_values")) hs = cfg.numbers("h_values");

  const Out out = make_out(cfg, "landau");

  CsvTable table;
  table.columns = {"h", "max_residual", "max_divergence"};
  std::vector<double> residuals;
  for (double h : hs) {
    const LandauResidual res = landau_residual(params, h, r0, r1);
    table.rows.push_back({h, res.max_residual, res.max_divergence});
    residuals.push_back(res.max_residual);
  }
  out.text("residual.csv", to_csv(table, out.hash));

  const PhysicalVectorField field =
      landau_sample_grid(params, grid, 2.0 * grid.spacing());
  save_pmns(out.path("field.pmns"), to_fourier(field));

  const bool pass = residuals.size() < 2 ||
                    (residuals.back() < residuals.front() &&
                     residuals.back() <= 1e-4);
  json summary{{"format_version", format_version},
               {"config_hash", hash_hex(out.hash)},
               {"c", params.c},
               {"beta1", landau_beta1(params.c)},
               {"pass", pass}};
  out.text("summary.json", summary.dump(2) + "\n");
  std::cout << "landau: " << (pass ? "pass" : "FAIL") << " c=" << params.c
            << " beta1=" << landau_beta1(params.c) << " -> "
            << out.dir.string() << "\n";
  return pass ? 0 : 2;
}

int run_verify_norms(const Node& cfg) {
  cfg.allow({"input", "band", "pm", "lq", "weak_lq", "interpolation",
             "hermitian_max", "out"});
  const FourierVectorField u = load_pmns(cfg.str("input"));
  const GridSpec& grid = u.grid;
  const NormBand band = cfg.has("band") ? parse_band(cfg.child("band"), grid)
                                        : NormBand::default_for(grid);
  const Out out = make_out(cfg, "norms");

  bool pass = true;
  json report{{"format_version", format_version},
              {"config_hash", hash_hex(out.hash)}};

  if (cfg.has("pm")) {
    json arr = json::array();
    for (double a : cfg.numbers("pm"))
      arr.push_back({{"a", a}, {"value", pm_norm(u, a, band)}});
    report["pm"] = arr;
  }
  if (cfg.has("lq") || cfg.has("weak_lq")) {
    const PhysicalVectorField phys = to_physical(u);
    for (const char* key : {"lq", "weak_lq"}) {
      if (!cfg.has(key)) continue;
      json arr = json::array();
      const std::size_t m = cfg.array_size(key);
      for (std::size_t i = 0; i < m; ++i) {
        const Node e = cfg.element(key, i);
        e.allow({"q", "annulus"});
        const double q = e.num("q");
        double v;
        if (e.has("annulus")) {
          const Node a = e.child("annulus");
          a.allow({"r0", "r1", "center"});
          Annulus ann{a.num("r0"), a.num("r1"), {}};
          if (a.has("center")) ann.center = a.vec3("center");
          v = std::string(key) == "lq" ? lq_norm(phys, q, ann)
                                       : weak_lq_norm(phys, q, ann);
        } else {
          v = std::string(key) == "lq" ? lq_norm(phys, q)
                                       : weak_lq_norm(phys, q);
        }
        arr.push_back({{"q", q}, {"value", v}});
      }
      report[key] = arr;
    }
  }
  if (cfg.has("interpolation")) {
    const Node n = cfg.child("interpolation");
    n.allow({"b", "q", "max_ratio"});
    const InterpolationReport rep =
        interpolation_gap(u, n.num("b"), n.num("q"), band);
    report["interpolation"] = {{"lq", rep.lq},
                               {"pm2", rep.pm2},
                               {"pmb", rep.pmb},
                               {"theta", rep.theta},
                               {"ratio", rep.ratio}};
    if (n.has("max_ratio") && rep.ratio > n.num("max_ratio")) pass = false;
  }
  if (cfg.has("hermitian_max")) {
    const double defect = hermitian_defect(u);
    report["hermitian_defect"] = defect;
    if (defect > cfg.num("hermitian_max")) pass = false;
  }

  report["pass"] = pass;
  out.text("report.json", report.dump(2) + "\n");
  std::cout << "verify-norms: " << (pass ? "pass" : "FAIL") << " -> "
            << out.dir.string() << "\n";
  return pass ? 0 : 2;
}

int run_rate_farfield(const Node& cfg) {
  cfg.allow({"grid", "time", "force", "datum", "solver", "band", "quantity",
             "region", "window", "tolerance", "out"});
  const GridSpec grid = parse_grid(cfg.child("grid"));
  const TimeGrid times = parse_time(cfg.child("time"));
  const ForceSpec force = parse_force(cfg.child("force"), grid);
  const FourierVectorField u0 =
      cfg.has("datum") ? parse_datum(cfg.child("datum"), grid)
                       : FourierVectorField::zeros(grid);
  const SolveOptions opt = parse_solver(cfg, grid);

  const Node qn = cfg.child("quantity");
  qn.allow({"kind", "order"});
  const std::string kind = qn.str("kind");
  if (kind != "lq" && kind != "pm")
    fail_at(qn.path() + ".kind", "expected lq | pm");
  const RateQuantity quantity = kind == "lq" ? RateQuantity::lq(qn.num("order"))
                                             : RateQuantity::pm(qn.num("order"));
  const RegionSpec region = cfg.has("region") ? parse_region(cfg.child("region"))
                                              : RegionSpec{1.0, 1.6,
                                                           RegionSpec::Scale::sqrt_t,
                                                           std::array<double, 3>{0, 0, 0}};
  const FitWindow window = parse_window(cfg);
  const double tol = cfg.num_or("tolerance", 0.05);
  const Out out = make_out(cfg, "farfield");

  const RateReport rep =
      run_farfield_rate(u0, force, quantity, grid, times, region, window, tol, opt);
  out.text("rate.json", rate_report_json(rep, out.hash));
  out.text("samples.csv", to_csv(rate_report_table(rep), out.hash));
  std::printf("rate-farfield: %s fitted=%.4f theory=%.4f (r2=%.4f) -> %s\n",
              rep.pass ? "pass" : "FAIL", rep.exponent_fit, rep.exponent_theory,
              rep.r_squared, out.dir.string().c_str());
  return rep.pass ? 0 : 2;
}

int run_rate_stability(const Node& cfg) {
  cfg.allow({"grid", "force", "force2", "b", "q", "solver", "band", "out"});
  const GridSpec grid = parse_grid(cfg.child("grid"));
  const ForceSpec g1 = parse_force(cfg.child("force"), grid);
  const ForceSpec g2 = parse_force(cfg.child("force2"), grid);
  const SolveOptions opt = parse_solver(cfg, grid);
  const Out out = make_out(cfg, "stability");

  const StabilityReport rep = run_stationary_stability(
      g1, g2, cfg.num("b"), cfg.num("q"), grid, opt);
  out.text("report.json", stability_report_json(rep, out.hash));
  std::printf("rate-stability: %s slope=%.4f spread=%.4f -> %s\n",
              rep.pass ? "pass" : "FAIL", rep.slope, rep.c_spread,
              out.dir.string().c_str());
  return rep.pass ? 0 : 2;
}

int run_rate_convergence(const Node& cfg) {
  cfg.allow({"grid", "time", "datum", "datum2", "force", "force2", "delta",
             "q", "region", "window", "slack", "solver", "band", "out"});
  const GridSpec grid = parse_grid(cfg.child("grid"));
  const TimeGrid times = parse_time(cfg.child("time"));
  const FourierVectorField u01 = parse_datum(cfg.child("datum"), grid);
  const FourierVectorField u02 = parse_datum(cfg.child("datum2"), grid);
  const ForceSpec f1 = parse_force(cfg.child("force"), grid);
  const ForceSpec f2 = cfg.has("force2") ? parse_force(cfg.child("force2"), grid)
                                         : parse_force(cfg.child("force"), grid);
  const SolveOptions opt = parse_solver(cfg, grid);
  std::optional<RegionSpec> region;
  if (cfg.has("region")) region = parse_region(cfg.child("region"));
  const Out out = make_out(cfg, "convergence");

  const ConvergenceReport rep = run_convergence_rate(
      u01, u02, f1, f2, cfg.num_or("delta", 0.0), cfg.num("q"), grid, times,
      region, parse_window(cfg), cfg.num_or("slack", 0.1), opt);
  out.text("report.json", convergence_report_json(rep, out.hash));
  std::printf(
      "rate-convergence: %s fitted=%.4f envelope=%.4f decreasing=%d -> %s\n",
      rep.pass ? "pass" : "FAIL", rep.rate.exponent_fit,
      rep.rate.exponent_theory, int(rep.weighted_decreasing),
      out.dir.string().c_str());
  return rep.pass ? 0 : 2;
}

int run_riesz(const Node& cfg) {
  cfg.allow({"b_values", "out"});
  std::vector<double> bs{1.5, 2.0, 2.5};
  if (cfg.has("b_values")) bs = cfg.numbers("b_values");
  const Out out = make_out(cfg, "riesz");

  CsvTable table;
  table.columns = {"b", "value"};
  for (double b : bs) table.rows.push_back({b, riesz_constant(b)});
  out.text("constants.csv", to_csv(table, out.hash));
  std::cout << "riesz: computed " << bs.size() << " constants -> "
            << out.dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// Config assembly: optional --config file, then --key value overrides with
// dotted paths. Multi-valued flags become arrays.

json parse_scalar(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (!v.is_discarded() && !text.empty() &&
      (v.is_number() || v.is_boolean() || v.is_null()))
    return v;
  return json(text);
}

json build_config(const std::string& config_path,
                  const std::vector<std::string>& extras) {
  json cfg = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file: " + config_path);
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config file " + config_path + ": " + e.what());
    }
    if (!cfg.is_object())
      throw ConfigError("config file " + config_path +
                        ": top level must be an object");
  }
  std::size_t i = 0;
  while (i < extras.size()) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0 || key.size() <= 2)
      throw ConfigError("expected --key value, got: " + key);
    key = key.substr(2);
    std::vector<json> values;
    ++i;
    while (i < extras.size() && extras[i].rfind("--", 0) != 0)
      values.push_back(parse_scalar(extras[i++]));
    if (values.empty()) throw ConfigError("flag --" + key + " needs a value");

    std::string pointer = "/";
    for (char c : key) pointer += c == '.' ? '/' : c;
    try {
      if (values.size() == 1)
        cfg[json::json_pointer(pointer)] = values[0];
      else
        cfg[json::json_pointer(pointer)] = json(values);
    } catch (const json::exception& e) {
      throw ConfigError("cannot apply --" + key + ": " + e.what());
    }
  }
  return cfg;
}

int dispatch(const std::string& name, const json& cfg) {
  const Node root(cfg, "");
  if (name == "solve-cauchy") return run_solve_cauchy(root);
  if (name == "solve-stationary") return run_solve_stationary(root);
  if (name == "landau") return run_landau(root);
  if (name == "verify-norms") return run_verify_norms(root);
  if (name == "rate-farfield") return run_rate_farfield(root);
  if (name == "rate-stability") return run_rate_stability(root);
  if (name == "rate-convergence") return run_rate_convergence(root);
  if (name == "riesz") return run_riesz(root);
  throw ConfigError("unknown subcommand: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-space mild solutions of the Navier-Stokes system "
               "with singular forces: solvers, closed forms, and decay-rate "
               "experiments"};
  app.require_subcommand(1);

  const std::vector<std::string> names{
      "solve-cauchy",    "solve-stationary", "landau",
      "verify-norms",    "rate-farfield",    "rate-stability",
      "rate-convergence", "riesz"};
  const std::vector<std::string> descriptions{
      "Picard-iterate the mild Cauchy problem and certify the contraction",
      "Solve the stationary fixed-point problem for a singular force",
      "Evaluate the closed-form stationary jet and its residuals",
      "Measure PM / L^q / weak-L^q norms of a stored field",
      "Fit far-field or spectral decay rates of a Cauchy trajectory",
      "Stationary stability sweep: gap norm against force gap",
      "Two-trajectory convergence against the sharp decay envelope",
      "Evaluate the bilinear product constant by quadrature"};

  std::vector<std::string> config_paths(names.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descriptions[i]);
    sub->add_option("--config", config_paths[i], "JSON configuration file");
    sub->allow_extras();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message or requested help
    return code == 0 ? 0 : 1;     // usage errors exit 1 regardless of kind
  }

  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      const json cfg = build_config(config_paths[i], subs[i]->remaining());
      return dispatch(names[i], cfg);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
