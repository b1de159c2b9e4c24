// Measures the quantities behind the frozen verify thresholds, per group
// preset. Run after any change to the kernel quadrature and refresh the
// tables in verify.cpp / configs/ from the printed sups.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dunkl/config.hpp"
#include "dunkl/verify.hpp"

using namespace dunkl;

namespace {

KernelEvaluator make_eval(const std::string& preset, int dim, double kappa) {
  GroupConfig g;
  g.preset = preset;
  g.dimension = dim;
  g.kappa.assign(dim, kappa);
  RootSystemSpec spec = build_spec(g);
  return KernelEvaluator(WeightedMeasure(spec, generate_group(spec)));
}

void sanity(const KernelEvaluator& ke) {
  std::printf("  constants: c_kappa=%.10g d_kappa=%.10g p=%.3g homdim=%.3g\n",
              ke.c_kappa(), ke.d_kappa(), ke.p_kappa(), ke.homogeneous_dimension());
  const int n = ke.measure().dimension();
  Rng rng(11, 0);
  double worst_se = 0, worst_sc = 0, ratio_min = 1e300, ratio_max = -1e300;
  int done = 0;
  while (done < 20) {
    Vec x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform(-1.5, 1.5);
      y[i] = rng.uniform(-1.5, 1.5);
    }
    if (ke.measure().group().orbit_distance(x, y) < 0.2) continue;
    ++done;
    double sub = ke.riesz_subordination(0, x, y).value;
    double exp = ke.riesz_explicit(0, x, y).value;
    double clo = ke.riesz_closed(0, x, y).value;
    worst_se = std::max(worst_se, std::abs(exp / sub - 1.0));
    worst_sc = std::max(worst_sc, std::abs(clo / sub - 1.0));
    double raw = exp * ke.c_kappa() / sub;
    ratio_min = std::min(ratio_min, raw);
    ratio_max = std::max(ratio_max, raw);
  }
  std::printf("  |explicit/sub-1| max=%.3e  |closed/sub-1| max=%.3e\n", worst_se,
              worst_sc);
  std::printf("  raw-d_kappa/sub ratio in [%.8g, %.8g] (should be ~c_kappa=%.8g)\n",
              ratio_min, ratio_max, ke.c_kappa());
}

void measure_sweeps(const std::string& label, const KernelEvaluator& ke,
                    bool with_hormander, std::uint64_t seed) {
  VerifyConfig cfg;
  cfg.preset_label = label;
  cfg.workers = 2;
  if (seed) cfg.seed = seed;
  // open thresholds: we only want the measured extremes
  cfg.thresholds.size_ceiling = 1e300;
  cfg.thresholds.smooth_y_ceiling = 1e300;
  cfg.thresholds.smooth_x_ceiling = 1e300;
  cfg.thresholds.lower_floor = 0.0;
  cfg.thresholds.hormander_ceiling = 1e300;
  cfg.thresholds.heat_C_up = 1e300;
  cfg.thresholds.heat_C_low = 1e300;
  cfg.thresholds.heat_C_lip = 1e300;

  SweepReport s = check_size(ke, 600, cfg);
  std::printf("  size: sup=%.6g inf=%.6g skipped=%d viol=%d\n", s.sup_ratio,
              s.inf_ratio, s.skipped, s.violations);
  SweepReport sy = check_smoothness(ke, SmoothVariable::y, 600, cfg);
  std::printf("  smooth-y: sup=%.6g skipped=%d\n", sy.sup_ratio, sy.skipped);
  SweepReport sx = check_smoothness(ke, SmoothVariable::x, 600, cfg);
  std::printf("  smooth-x: sup=%.6g skipped=%d\n", sx.sup_ratio, sx.skipped);

  const int n = ke.measure().dimension();
  std::vector<Vec> centers;
  Rng rng(5, 1);
  for (int i = 0; i < 10; ++i) {
    Vec c(n);
    for (int k = 0; k < n; ++k) c[k] = rng.uniform(-3.0, 3.0);
    centers.push_back(c);
  }
  SweepReport lb = check_lower_bound(ke, {0.25, 1.0, 4.0}, centers, 24, cfg);
  std::printf("  lower: min m=%.6g viol_rows=%d skipped=%d\n", lb.inf_ratio,
              lb.violations, lb.skipped);

  SweepReport hb = check_heat_bounds(ke, 1200, cfg);
  std::printf("  heat: %s (skipped=%d)\n", hb.note.c_str(), hb.skipped);

  if (with_hormander) {
    std::vector<std::pair<Vec, Vec>> pairs;
    for (int i = 0; i < 10; ++i) {
      Vec y(1), y0(1);
      y << rng.uniform(-2.0, 2.0);
      y0 << y[0] + rng.uniform(-0.4, 0.4);
      pairs.push_back({y, y0});
    }
    SweepReport h = check_hormander(ke, pairs, 8.0, cfg);
    std::printf("  hormander: worst total=%.6g\n", h.sup_ratio);
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = argc > 1 && std::string(argv[1]) == "--quick";
  std::uint64_t seed = 0;
  if (argc > 1 && !quick) seed = std::strtoull(argv[1], nullptr, 10);

  struct Row {
    const char* label;
    const char* preset;
    int dim;
    double kappa;
  };
  const Row rows[] = {
      {"trivial-1d", "trivial", 1, 0.0}, {"z2-0.5", "z2^n", 1, 0.5},
      {"z2-1", "z2^n", 1, 1.0},          {"z2^2-0.5", "z2^n", 2, 0.5},
      {"z2^2-1", "z2^n", 2, 1.0},
  };
  for (const Row& r : rows) {
    std::printf("== %s ==\n", r.label);
    KernelEvaluator ke = make_eval(r.preset, r.dim, r.kappa);
    if (r.kappa > 0 && seed == 0) sanity(ke);
    if (!quick) measure_sweeps(r.label, ke, r.dim == 1, seed);
    std::fflush(stdout);
  }
  return 0;
}
