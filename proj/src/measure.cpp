#include "dunkl/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dunkl/quadrature.hpp"

namespace dunkl {

WeightedMeasure::WeightedMeasure(RootSystemSpec spec, ReflectionGroup group)
    : spec_(std::move(spec)), group_(std::move(group)) {
  if (group_.dimension() != spec_.dimension())
    throw InvalidArgument("measure: spec/group dimension mismatch");
  hom_dim_ = spec_.dimension() + spec_.gamma();
}

double WeightedMeasure::weight_density(const Vec& x) const {
  double w = 1.0;
  const auto& roots = spec_.roots();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    double k = spec_.multiplicity(static_cast<int>(i));
    if (k == 0.0) continue;
    w *= std::pow(std::abs(roots[i].dot(x)), k);
  }
  return w;
}

IntegralResult WeightedMeasure::ball_measure(const Ball& b,
                                             const MeasureOptions& opt) const {
  if (!(b.radius > 0.0)) throw InvalidArgument("ball_measure: radius must be > 0");
  switch (dimension()) {
    case 1:
      return ball_measure_1d(b, opt);
    case 2:
      return ball_measure_2d(b, opt);
    case 3: {
      Vec lo = b.center.array() - b.radius;
      Vec hi = b.center.array() + b.radius;
      Vec c = b.center;
      double r = b.radius;
      return mc_measure(lo, hi, [c, r](const Vec& y) { return (y - c).norm() < r; },
                        opt);
    }
    default:
      throw NotImplemented("ball_measure: N > 3 not supported");
  }
}

IntegralResult WeightedMeasure::ball_measure_1d(const Ball& b,
                                                const MeasureOptions& opt) const {
  AdaptiveOptions a;
  a.rel_tol = opt.rel_tol * 0.5;
  a.max_intervals = opt.max_intervals;
  a.split_points = {0.0};  // every 1-D root hyperplane is the origin
  auto f = [this](double x) {
    Vec v(1);
    v << x;
    return weight_density(v);
  };
  return integrate(f, b.center[0] - b.radius, b.center[0] + b.radius, a);
}

IntegralResult WeightedMeasure::ball_measure_2d(const Ball& b,
                                                const MeasureOptions& opt) const {
  // polar coordinates about the center; root lines cut both integrands
  const Vec c = b.center;
  const double r = b.radius;
  const auto& roots = spec_.roots();

  AdaptiveOptions inner;
  inner.rel_tol = opt.rel_tol / 5.0;
  inner.max_intervals = 200;

  auto ray_integral = [&](double theta) {
    Vec u(2);
    u << std::cos(theta), std::sin(theta);
    AdaptiveOptions io = inner;
    for (const Vec& alpha : roots) {
      double du = alpha.dot(u);
      if (std::abs(du) > 1e-14) {
        double s = -alpha.dot(c) / du;
        if (s > 0.0 && s < r) io.split_points.push_back(s);
      }
    }
    auto f = [&](double s) { return weight_density(c + s * u) * s; };
    return integrate(f, 0.0, r, io).value;
  };

  AdaptiveOptions outer;
  outer.rel_tol = opt.rel_tol * 0.5;
  outer.max_intervals = opt.max_intervals;
  const double pi = 3.14159265358979323846;
  // angles where a root line crosses the circle or runs parallel to the ray
  for (const Vec& alpha : roots) {
    double an = alpha.norm();
    double dist = std::abs(alpha.dot(c)) / an;
    double phi = std::atan2(alpha[1], alpha[0]);
    outer.split_points.push_back(std::fmod(phi + 0.5 * pi + 2 * pi, 2 * pi));
    outer.split_points.push_back(std::fmod(phi + 1.5 * pi + 2 * pi, 2 * pi));
    if (dist < r) {
      // intersection points of the line {<alpha,y>=0} with the circle
      Vec t(2);
      t << -alpha[1] / an, alpha[0] / an;  // direction of the line
      Vec foot = c - (alpha.dot(c) / (an * an)) * alpha;
      double half = std::sqrt(std::max(0.0, r * r - dist * dist));
      for (double sgn : {-1.0, 1.0}) {
        Vec p = foot + sgn * half * t - c;
        outer.split_points.push_back(std::fmod(std::atan2(p[1], p[0]) + 2 * pi, 2 * pi));
      }
    }
  }
  IntegralResult res = integrate(ray_integral, 0.0, 2 * pi, outer);
  // inner tolerance contributes up to rel/5 of the value on top of the outer
  // rule discrepancy
  res.error += std::abs(res.value) * opt.rel_tol / 5.0;
  res.converged = res.converged && res.error <= opt.rel_tol * std::abs(res.value);
  return res;
}

IntegralResult WeightedMeasure::mc_measure(
    const Vec& lo, const Vec& hi, const std::function<bool(const Vec&)>& inside,
    const MeasureOptions& opt) const {
  const int n = dimension();
  double box_vol = 1.0;
  for (int i = 0; i < n; ++i) box_vol *= hi[i] - lo[i];

  // stratified: split the box into k^n strata, sample in rounds until the
  // standard error target or the budget is reached
  const int k = (n == 3) ? 8 : 16;
  int strata = 1;
  for (int i = 0; i < n; ++i) strata *= k;
  const long per_round = 16;

  std::vector<double> sum(strata, 0.0), sumsq(strata, 0.0);
  long per_stratum = 0;
  long used = 0;
  double value = 0.0, stderr_est = 0.0;
  const double cell_vol = box_vol / strata;

  Rng rng(opt.seed, 0xba11);
  Vec y(n);
  while (used < opt.mc_budget) {
    for (int s = 0; s < strata; ++s) {
      int idx = s;
      for (long rep = 0; rep < per_round; ++rep) {
        int tmp = idx;
        for (int i = 0; i < n; ++i) {
          int cell = tmp % k;
          tmp /= k;
          double w = (hi[i] - lo[i]) / k;
          y[i] = lo[i] + (cell + rng.uniform()) * w;
        }
        double v = inside(y) ? weight_density(y) : 0.0;
        sum[s] += v;
        sumsq[s] += v * v;
      }
    }
    per_stratum += per_round;
    used += per_round * strata;

    value = 0.0;
    double var = 0.0;
    for (int s = 0; s < strata; ++s) {
      double mean = sum[s] / per_stratum;
      double m2 = sumsq[s] / per_stratum - mean * mean;
      value += cell_vol * mean;
      var += cell_vol * cell_vol * std::max(0.0, m2) / per_stratum;
    }
    stderr_est = std::sqrt(var);
    if (value > 0 && stderr_est <= opt.rel_tol * value) break;
  }
  return {value, stderr_est, value > 0 && stderr_est <= opt.rel_tol * value};
}

IntegralResult WeightedMeasure::orbit_ball_measure(const OrbitBall& ob,
                                                   const MeasureOptions& opt) const {
  const Ball& b = ob.base;
  if (!(b.radius > 0.0))
    throw InvalidArgument("orbit_ball_measure: radius must be > 0");
  std::vector<Vec> centers = group_.orbit(b.center);
  if (centers.size() == 1) return ball_measure(b, opt);

  if (dimension() == 1) {
    // merge the reflected intervals, then quadrature piece by piece
    std::vector<std::pair<double, double>> iv;
    for (const Vec& c : centers) iv.push_back({c[0] - b.radius, c[0] + b.radius});
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> merged{iv[0]};
    for (std::size_t i = 1; i < iv.size(); ++i) {
      if (iv[i].first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, iv[i].second);
      else
        merged.push_back(iv[i]);
    }
    AdaptiveOptions a;
    a.rel_tol = opt.rel_tol * 0.5;
    a.max_intervals = opt.max_intervals;
    a.split_points = {0.0};
    auto f = [this](double x) {
      Vec v(1);
      v << x;
      return weight_density(v);
    };
    IntegralResult total{0.0, 0.0, true};
    for (auto [lo, hi] : merged) {
      IntegralResult r = integrate(f, lo, hi, a);
      total.value += r.value;
      total.error += r.error;
      total.converged = total.converged && r.converged;
    }
    return total;
  }

  Vec lo = centers[0], hi = centers[0];
  for (const Vec& c : centers) {
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  lo.array() -= b.radius;
  hi.array() += b.radius;
  Vec c0 = b.center;
  double r = b.radius;
  const ReflectionGroup& g = group_;
  return mc_measure(lo, hi,
                    [&g, c0, r](const Vec& y) { return g.orbit_distance(c0, y) < r; },
                    opt);
}

IntegralResult WeightedMeasure::v_max(const Vec& x, const Vec& y, double r,
                                      const MeasureOptions& opt) const {
  IntegralResult a = ball_measure({x, r}, opt);
  IntegralResult v = ball_measure({y, r}, opt);
  if (v.value < a.value) v = a;
  return v;
}

}  // namespace dunkl
