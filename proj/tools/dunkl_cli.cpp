#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dunkl/config.hpp"
#include "dunkl/io.hpp"
#include "dunkl/operators.hpp"
#include "dunkl/verify.hpp"

using namespace dunkl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Cli {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  bool strict = false;
  std::string out_dir;
};

RunConfig load(const Cli& cli) {
  RunConfig cfg = cli.config_path.empty() ? parse_config(json::object())
                                          : load_config_file(cli.config_path);
  if (cli.seed_set) cfg.seed = cli.seed;
  if (cli.workers > 0) cfg.workers = cli.workers;
  if (cli.strict) cfg.strict = true;
  if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
  fs::create_directories(cfg.out_dir);
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

void emit_config_snapshot(const RunConfig& cfg, const std::string& name) {
  write_json(out_path(cfg, name), config_to_json(cfg));
}

WeightedMeasure make_measure(const RunConfig& cfg) {
  RootSystemSpec spec = build_spec(cfg.group);
  return WeightedMeasure(spec, generate_group(spec, cfg.group.max_order));
}

GridFunction make_grid(const RunConfig& cfg, const WeightedMeasure& m,
                       const std::string& preset) {
  Vec lo = Vec::Constant(m.dimension(), -cfg.grid.box_halfwidth);
  Vec hi = Vec::Constant(m.dimension(), cfg.grid.box_halfwidth);
  auto fn = preset_function(preset);
  return GridFunction(m, lo, hi, cfg.grid.cells, fn);
}

// ---------------------------------------------------------------------------

int run_group(const RunConfig& cfg) {
  WeightedMeasure m = make_measure(cfg);
  const ReflectionGroup& g = m.group();
  json j;
  j["order"] = g.order();
  j["dimension"] = g.dimension();
  j["generators"] = g.generator_indices();
  j["gamma_kappa"] = m.spec().gamma();
  j["homogeneous_dimension"] = m.homogeneous_dimension();
  j["config"] = config_to_json(cfg);
  write_json(out_path(cfg, "group.json"), j);

  std::vector<std::string> cols{"element"};
  for (int r = 0; r < g.dimension(); ++r)
    for (int c = 0; c < g.dimension(); ++c)
      cols.push_back("m" + std::to_string(r) + std::to_string(c));
  std::vector<std::vector<double>> rows;
  for (int e = 0; e < g.order(); ++e) {
    std::vector<double> row{static_cast<double>(e)};
    for (int r = 0; r < g.dimension(); ++r)
      for (int c = 0; c < g.dimension(); ++c) row.push_back(g.elements()[e](r, c));
    rows.push_back(std::move(row));
  }
  write_csv(out_path(cfg, "group_elements.csv"), cols, rows);
  std::cout << "group: |G| = " << g.order() << ", homogeneous dimension "
            << m.homogeneous_dimension() << "\n";
  return 0;
}

int run_measure(const RunConfig& cfg) {
  WeightedMeasure m = make_measure(cfg);
  // sweep spec: explicit balls or a radii x centers lattice
  std::vector<std::pair<Ball, bool>> balls;  // (ball, orbit?)
  const json& raw = cfg.raw;
  if (raw.contains("measure") && raw["measure"].contains("balls")) {
    for (const json& jb : raw["measure"]["balls"]) {
      Ball b;
      auto cv = jb.at("center").get<std::vector<double>>();
      if (static_cast<int>(cv.size()) != m.dimension())
        throw InvalidArgument("measure.balls.center: dimension mismatch");
      b.center = Eigen::Map<const Vec>(cv.data(), cv.size());
      b.radius = jb.at("radius").get<double>();
      balls.push_back({b, jb.value("orbit", false)});
    }
  } else {
    std::vector<double> radii{0.25, 0.5, 1.0, 2.0};
    for (double c = -2.0; c <= 2.0; c += 1.0) {
      for (double r : radii) {
        Ball b{Vec::Constant(m.dimension(), c), r};
        balls.push_back({b, false});
        if (m.group().order() > 1) balls.push_back({b, true});
      }
    }
  }
  MeasureOptions mo;
  mo.rel_tol = cfg.measure_tol;
  mo.seed = cfg.seed;
  std::vector<std::string> cols;
  for (int i = 0; i < m.dimension(); ++i) cols.push_back("center" + std::to_string(i));
  cols.insert(cols.end(), {"radius", "orbit", "value", "stderr", "converged", "seed"});
  std::vector<std::vector<double>> rows;
  int failures = 0;
  for (const auto& [b, orbit] : balls) {
    IntegralResult r =
        orbit ? m.orbit_ball_measure({b}, mo) : m.ball_measure(b, mo);
    if (!r.converged) ++failures;
    std::vector<double> row;
    for (int i = 0; i < m.dimension(); ++i) row.push_back(b.center[i]);
    row.insert(row.end(), {b.radius, orbit ? 1.0 : 0.0, r.value, r.error,
                           r.converged ? 1.0 : 0.0, static_cast<double>(cfg.seed)});
    rows.push_back(std::move(row));
  }
  write_csv(out_path(cfg, "measure.csv"), cols, rows);
  emit_config_snapshot(cfg, "measure_config.json");
  std::cout << "measure: " << rows.size() << " rows -> measure.csv\n";
  return cfg.strict && failures > 0 ? 1 : 0;
}

int run_kernel(const RunConfig& cfg) {
  WeightedMeasure m = make_measure(cfg);
  KernelEvaluator ke(m, cfg.kernel);
  const json& raw = cfg.raw;
  std::string method = "heat";
  if (raw.contains("kernel") && raw["kernel"].contains("method"))
    method = raw["kernel"]["method"].get<std::string>();
  if (method != "heat" && method != "riesz-subordination" &&
      method != "riesz-explicit" && method != "riesz-closed")
    throw InvalidArgument("kernel.method: unknown method " + method);

  // points: explicit list or a seeded random sweep
  std::vector<std::tuple<Vec, Vec, double>> pts;  // (x, y, t or j)
  if (raw.contains("kernel") && raw["kernel"].contains("points")) {
    for (const json& jp : raw["kernel"]["points"]) {
      auto xv = jp.at("x").get<std::vector<double>>();
      auto yv = jp.at("y").get<std::vector<double>>();
      double tj = method == "heat" ? jp.at("t").get<double>()
                                   : static_cast<double>(jp.value("j", 0));
      pts.push_back({Eigen::Map<const Vec>(xv.data(), xv.size()),
                     Eigen::Map<const Vec>(yv.data(), yv.size()), tj});
    }
  } else {
    int count = 50;
    if (raw.contains("kernel")) count = raw["kernel"].value("count", 50);
    for (int s = 0; s < count; ++s) {
      Rng rng(cfg.seed, 0xce11 + s);
      Vec x = rng.uniform_vec(m.dimension(), -2.0, 2.0);
      Vec y = rng.uniform_vec(m.dimension(), -2.0, 2.0);
      pts.push_back({x, y, method == "heat" ? std::exp(rng.uniform(-2.0, 2.0)) : 0});
    }
  }

  std::vector<std::string> cols;
  for (int i = 0; i < m.dimension(); ++i) cols.push_back("x" + std::to_string(i));
  for (int i = 0; i < m.dimension(); ++i) cols.push_back("y" + std::to_string(i));
  cols.insert(cols.end(), {"t_or_j", "value", "method_id", "est_error", "converged"});
  double method_id = method == "heat" ? 0 : (method == "riesz-subordination" ? 1
                                             : method == "riesz-explicit"   ? 2
                                                                            : 3);
  std::vector<std::vector<double>> rows(pts.size());
  int failures = 0;
  parallel_for(pts.size(), cfg.workers, [&](std::size_t i) {
    auto& [x, y, tj] = pts[i];
    std::vector<double> row;
    for (int k = 0; k < m.dimension(); ++k) row.push_back(x[k]);
    for (int k = 0; k < m.dimension(); ++k) row.push_back(y[k]);
    row.push_back(tj);
    try {
      KernelValue kv;
      if (method == "heat")
        kv = {ke.heat_kernel(tj, x, y), 0.0, true, false};
      else if (method == "riesz-subordination")
        kv = ke.riesz_subordination(static_cast<int>(tj), x, y);
      else if (method == "riesz-explicit")
        kv = ke.riesz_explicit(static_cast<int>(tj), x, y);
      else
        kv = ke.riesz_closed(static_cast<int>(tj), x, y);
      row.insert(row.end(),
                 {kv.value, method_id, kv.est_error, kv.converged ? 1.0 : 0.0});
    } catch (const Error&) {
      row.insert(row.end(), {0.0, method_id, -1.0, 0.0});
    }
    rows[i] = std::move(row);
  });
  for (auto& r : rows)
    if (!r.empty() && r.back() == 0.0) ++failures;
  write_csv(out_path(cfg, "kernel.csv"), cols, rows);
  emit_config_snapshot(cfg, "kernel_config.json");
  std::cout << "kernel: " << rows.size() << " rows (" << method
            << ") -> kernel.csv\n";
  return cfg.strict && failures > 0 ? 1 : 0;
}

int run_bmo(const RunConfig& cfg) {
  WeightedMeasure m = make_measure(cfg);
  const json& raw = cfg.raw;
  std::string preset = "log-abs-m1";
  std::string mode_str = "euclidean";
  std::vector<double> radii{0.125, 0.25, 0.5, 1.0, 2.0};
  int lattice = 9;
  if (raw.contains("bmo")) {
    const json& b = raw["bmo"];
    preset = b.value("symbol", preset);
    mode_str = b.value("mode", mode_str);
    if (b.contains("radii")) radii = b["radii"].get<std::vector<double>>();
    lattice = b.value("lattice", lattice);
  }
  if (mode_str != "euclidean" && mode_str != "orbit")
    throw InvalidArgument("bmo.mode: must be euclidean or orbit");
  GridFunction f = make_grid(cfg, m, preset);
  std::vector<Ball> family = dyadic_ball_family(
      0.75 * f.box_lo(), 0.75 * f.box_hi(), lattice, radii);
  BmoMode mode = mode_str == "orbit" ? BmoMode::orbit : BmoMode::euclidean;
  OscillationReport rep = bmo_norm(f, mode, family);
  write_oscillation_csv(out_path(cfg, "bmo.csv"), rep);
  json j = oscillation_to_json(rep);
  j["symbol"] = preset;
  j["mode"] = mode_str;
  j["config"] = config_to_json(cfg);
  write_json(out_path(cfg, "bmo.json"), j);
  std::cout << "bmo: sup oscillation (" << mode_str << ", " << preset
            << ") = " << rep.sup_oscillation << "\n";
  return 0;
}

int run_commutator(const RunConfig& cfg) {
  WeightedMeasure m = make_measure(cfg);
  KernelEvaluator ke(m, cfg.kernel);
  const json& raw = cfg.raw;
  std::string preset = "sign-split";
  double p = 2.0;
  double eps = 0.0;
  int j_comp = 0;
  if (raw.contains("commutator")) {
    const json& c = raw["commutator"];
    preset = c.value("symbol", preset);
    p = c.value("p", p);
    eps = c.value("eps_trunc", eps);
    j_comp = c.value("j", 0);
  }
  if (!(p > 1.0)) throw InvalidArgument("commutator.p: must be in (1, inf)");
  GridFunction b = make_grid(cfg, m, preset);
  double h = 2.0 * cfg.grid.box_halfwidth / cfg.grid.cells;
  if (eps <= 0) eps = 1.5 * h;
  AssembleOptions ao;
  ao.workers = cfg.workers;
  DiscretizedOperator T = assemble_riesz(ke, b, j_comp, eps, ao);
  Mat C = commutator_matrix(T, b);
  NormEstimate ne = op_norm_estimate(C, b, p, 24, cfg.seed);

  std::vector<double> radii;
  for (double r = cfg.grid.box_halfwidth / 2.0; r >= 6.0 * h; r /= 2.0)
    radii.push_back(r);
  if (radii.empty()) radii.push_back(cfg.grid.box_halfwidth / 2.0);
  std::vector<Ball> family =
      dyadic_ball_family(0.6 * b.box_lo(), 0.6 * b.box_hi(), 5, radii);
  double bmo_e = bmo_norm(b, BmoMode::euclidean, family).sup_oscillation;
  double bmo_d = bmo_norm(b, BmoMode::orbit, family).sup_oscillation;

  // per-test-function rows (the p != 2 maximization transcript)
  std::vector<std::vector<double>> rows;
  Rng rng(cfg.seed, 0xc033);
  for (int t = 0; t < 24; ++t) {
    Vec f(b.size());
    for (int i = 0; i < b.size(); ++i) f[i] = rng.normal();
    GridFunction gf = b.with_values(f);
    double fn = lp_norm(gf, p);
    GridFunction cf = gf.with_values(C * f);
    rows.push_back({static_cast<double>(t), fn > 0 ? lp_norm(cf, p) / fn : 0.0});
  }
  write_csv(out_path(cfg, "commutator_trials.csv"), {"trial", "ratio"}, rows);

  json j;
  j["op_norm_lower"] = ne.value;
  j["op_norm_converged"] = ne.converged;
  j["bmo_euclidean"] = bmo_e;
  j["bmo_orbit"] = bmo_d;
  j["excluded_entries"] = T.excluded;
  j["eps_trunc"] = eps;
  j["ratios"]["norm_over_bmo_orbit"] = bmo_d > 0 ? ne.value / bmo_d : 0.0;
  j["ratios"]["bmo_euclidean_over_norm"] = ne.value > 0 ? bmo_e / ne.value : 0.0;
  j["symbol"] = preset;
  j["p"] = p;
  j["config"] = config_to_json(cfg);
  write_json(out_path(cfg, "commutator.json"), j);
  std::cout << "commutator: |[b,R_j]| >= " << ne.value << ", bmo_e = " << bmo_e
            << ", bmo_d = " << bmo_d << "\n";
  return 0;
}

int run_verify_all(const RunConfig& cfg) {
  WeightedMeasure m = make_measure(cfg);
  KernelEvaluator ke(m, cfg.kernel);
  VerifyConfig vc;
  vc.seed = cfg.seed;
  vc.workers = cfg.workers;
  vc.preset_label = preset_label(cfg.group);
  vc.measure_tol = std::min(cfg.measure_tol, 1e-3);
  vc.thresholds = frozen_thresholds(vc.preset_label);
  const json& raw = cfg.raw;
  int samples = 500;
  int heat_samples = 1000;
  if (raw.contains("verify")) {
    samples = raw["verify"].value("samples", samples);
    heat_samples = raw["verify"].value("heat_samples", heat_samples);
    if (raw["verify"].contains("thresholds")) {
      const json& t = raw["verify"]["thresholds"];
      auto ov = [&](const char* k, double& v) {
        if (t.contains(k)) v = t[k].get<double>();
      };
      ov("size_ceiling", vc.thresholds.size_ceiling);
      ov("smooth_y_ceiling", vc.thresholds.smooth_y_ceiling);
      ov("smooth_x_ceiling", vc.thresholds.smooth_x_ceiling);
      ov("lower_floor", vc.thresholds.lower_floor);
      ov("hormander_ceiling", vc.thresholds.hormander_ceiling);
      ov("heat_C_up", vc.thresholds.heat_C_up);
      ov("heat_C_low", vc.thresholds.heat_C_low);
      ov("heat_C_lip", vc.thresholds.heat_C_lip);
    }
  }

  std::vector<SweepReport> reports;
  reports.push_back(check_size(ke, samples, vc));
  reports.push_back(check_smoothness(ke, SmoothVariable::y, samples, vc));
  reports.push_back(check_smoothness(ke, SmoothVariable::x, samples, vc));
  {
    Rng rng(cfg.seed, 0xce);
    std::vector<Vec> centers;
    for (int i = 0; i < 10; ++i)
      centers.push_back(rng.uniform_vec(m.dimension(), -3.0, 3.0));
    reports.push_back(check_lower_bound(ke, {0.25, 1.0, 4.0}, centers, 24, vc));
  }
  reports.push_back(check_heat_bounds(ke, heat_samples, vc));
  if (m.dimension() == 1) {
    Rng rng(cfg.seed, 0xb0);
    std::vector<std::pair<Vec, Vec>> pairs;
    for (int i = 0; i < 10; ++i) {
      Vec y(1), y0(1);
      y << rng.uniform(-2.0, 2.0);
      y0 << y[0] + rng.uniform(-0.4, 0.4);
      pairs.push_back({y, y0});
    }
    reports.push_back(check_hormander(ke, pairs, 8.0, vc));
  }
  {
    CommutatorCheckOptions co;
    reports.push_back(check_commutator_bounds(ke, co, vc));
  }

  json verdict;
  bool all_pass = true;
  for (const SweepReport& r : reports) {
    verdict["checks"][r.check_id] = sweep_to_json(r);
    write_sweep_csv(out_path(cfg, "verify_" + r.check_id + ".csv"), r);
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.check_id
              << " (samples=" << r.samples << ", violations=" << r.violations
              << ", sup=" << r.sup_ratio << ")\n";
  }
  verdict["pass"] = all_pass;
  verdict["preset"] = vc.preset_label;
  verdict["config"] = config_to_json(cfg);
  write_json(out_path(cfg, "verify_verdict.json"), verdict);
  std::cout << (all_pass ? "verify-all: PASS" : "verify-all: FAIL") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for Dunkl reflection-group analysis"};
  app.require_subcommand(1);
  Cli cli;
  app.add_option("--config", cli.config_path, "JSON config path");
  auto* seed_opt = app.add_option("--seed", cli.seed, "RNG seed override");
  app.add_option("--workers", cli.workers, "worker threads");
  app.add_flag("--strict", cli.strict, "row-level numerical failures become fatal");
  app.add_option("--out", cli.out_dir, "output directory");

  auto* c_group = app.add_subcommand("group", "generate the reflection group");
  auto* c_measure = app.add_subcommand("measure", "ball / orbit-ball volume sweep");
  auto* c_kernel = app.add_subcommand("kernel", "heat / Riesz kernel evaluation");
  auto* c_bmo = app.add_subcommand("bmo", "oscillation report for a symbol");
  auto* c_comm = app.add_subcommand("commutator", "commutator norm vs BMO estimates");
  auto* c_verify = app.add_subcommand("verify-all", "run the full theorem battery");
  for (CLI::App* s : {c_group, c_measure, c_kernel, c_bmo, c_comm, c_verify})
    s->fallthrough();

  CLI11_PARSE(app, argc, argv);
  cli.seed_set = seed_opt->count() > 0;

  try {
    RunConfig cfg = load(cli);
    if (c_group->parsed()) return run_group(cfg);
    if (c_measure->parsed()) return run_measure(cfg);
    if (c_kernel->parsed()) return run_kernel(cfg);
    if (c_bmo->parsed()) return run_bmo(cfg);
    if (c_comm->parsed()) return run_commutator(cfg);
    if (c_verify->parsed()) return run_verify_all(cfg);
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
