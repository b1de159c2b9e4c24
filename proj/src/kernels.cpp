#include "dunkl/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace dunkl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// mu0(kappa) = int_{-1}^1 (1-t)^{k-1}(1+t)^k dt, via t = -cos(theta) which
// smooths the endpoint behavior for kappa >= 1/2.
double mu0_by_quadrature(double kappa) {
  auto f = [kappa](double th) {
    double c = std::cos(0.5 * th), s = std::sin(0.5 * th);
    return std::pow(2.0, 2.0 * kappa) * std::pow(c, 2.0 * kappa - 1.0) *
           std::pow(s, 2.0 * kappa + 1.0);
  };
  AdaptiveOptions opt;
  opt.rel_tol = 1e-13;
  opt.max_intervals = 8000;
  IntegralResult r = integrate(f, 0.0, kPi, opt);
  return r.value;
}

struct MuConsts {
  double mu0;
  double mass_constant;  // M_kappa = 1/mu0
};

const MuConsts& mu_consts(double kappa) {
  static std::mutex mtx;
  static std::map<double, MuConsts> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(kappa);
  if (it == cache.end()) {
    double mu0 = mu0_by_quadrature(kappa);
    it = cache.emplace(kappa, MuConsts{mu0, 1.0 / mu0}).first;
  }
  return it->second;
}

double a_squared(const Vec& x, const Vec& y, const Vec& eta) {
  return x.squaredNorm() + y.squaredNorm() - 2.0 * y.dot(eta);
}

int jacobi_bucket(double b) {
  double need = 0.8 * std::abs(b) + 24.0;
  for (int n : {24, 48, 96, 192, 384})
    if (n >= need) return n;
  return 384;
}

}  // namespace

double rank1_mu_mass_constant(double kappa) {
  if (!(kappa > 0.0))
    throw InvalidArgument("rank1_mu: kappa must be > 0 (kappa = 0 is a Dirac mass)");
  return mu_consts(kappa).mass_constant;
}

double rank1_mu_density(double kappa, double x, double eta) {
  if (!(kappa > 0.0))
    throw InvalidArgument("rank1_mu: kappa must be > 0 (kappa = 0 is a Dirac mass)");
  if (x == 0.0) throw InvalidArgument("rank1_mu: x must be nonzero (use the Dirac kind)");
  double ax = std::abs(x), s = x > 0 ? 1.0 : -1.0;
  if (eta <= -ax || eta >= ax) return 0.0;
  double m = rank1_mu_mass_constant(kappa);
  return m * std::pow(ax, -2.0 * kappa) * std::pow(ax - s * eta, kappa - 1.0) *
         std::pow(ax + s * eta, kappa);
}

IntertwiningMeasure IntertwiningMeasure::for_spec(const RootSystemSpec& spec) {
  std::vector<double> ck;
  if (!spec.is_z2_product(&ck))
    throw NotImplemented(
        "intertwining measure: explicit mu_x only available for Z2^N products");
  return IntertwiningMeasure{std::move(ck)};
}

double compute_c_kappa(const RootSystemSpec& spec) {
  const int n = spec.dimension();
  const double hom = n + spec.gamma();
  const double radial = std::pow(2.0, hom / 2.0 - 1.0) * std::tgamma(hom / 2.0);

  auto weight_on = [&spec](const Vec& u) {
    double w = 1.0;
    for (std::size_t i = 0; i < spec.roots().size(); ++i) {
      double k = spec.multiplicity(static_cast<int>(i));
      if (k > 0.0) w *= std::pow(std::abs(spec.roots()[i].dot(u)), k);
    }
    return w;
  };

  double angular = 0.0;
  if (n == 1) {
    Vec u(1);
    u << 1.0;
    angular = weight_on(u);
    u << -1.0;
    angular += weight_on(u);
  } else if (n == 2) {
    AdaptiveOptions opt;
    opt.rel_tol = 1e-11;
    for (const Vec& a : spec.roots()) {
      double phi = std::atan2(a[1], a[0]);
      opt.split_points.push_back(std::fmod(phi + 0.5 * kPi + 2 * kPi, 2 * kPi));
      opt.split_points.push_back(std::fmod(phi + 1.5 * kPi + 2 * kPi, 2 * kPi));
    }
    angular = integrate(
                  [&](double th) {
                    Vec u(2);
                    u << std::cos(th), std::sin(th);
                    return weight_on(u);
                  },
                  0.0, 2 * kPi, opt)
                  .value;
  } else if (n == 3) {
    AdaptiveOptions outer;
    outer.rel_tol = 1e-9;
    outer.split_points = {0.5 * kPi};
    angular = integrate(
                  [&](double th) {
                    AdaptiveOptions inner;
                    inner.rel_tol = 1e-10;
                    inner.split_points = {0.5 * kPi, kPi, 1.5 * kPi};
                    double st = std::sin(th), ct = std::cos(th);
                    return integrate(
                               [&](double ph) {
                                 Vec u(3);
                                 u << st * std::cos(ph), st * std::sin(ph), ct;
                                 return weight_on(u);
                               },
                               0.0, 2 * kPi, inner)
                               .value *
                           st;
                  },
                  0.0, kPi, outer)
                  .value;
  } else {
    throw NotImplemented("c_kappa: N > 3 not supported");
  }
  return radial * angular;
}

KernelEvaluator::KernelEvaluator(WeightedMeasure measure, KernelConfig config)
    : measure_(std::move(measure)),
      config_(config),
      mu_(IntertwiningMeasure::for_spec(measure_.spec())) {
  const RootSystemSpec& spec = measure_.spec();
  gamma_ = spec.gamma();
  hom_dim_ = measure_.homogeneous_dimension();
  p_kappa_ = gamma_ + spec.dimension() + 1.0;  // = hom_dim + 1
  c_kappa_ = compute_c_kappa(spec);
  d_kappa_ = std::pow(2.0, (p_kappa_ - 1.0) / 2.0) * std::tgamma(p_kappa_ / 2.0) /
             std::sqrt(kPi);
  c1_ = 1.0 / std::sqrt(kPi);

  coord_.resize(spec.dimension());
  for (int i = 0; i < spec.dimension(); ++i) {
    double k = mu_.kappa[i];
    coord_[i].kappa = k;
    if (k > 0.0) {
      coord_[i].mu0 = mu_consts(k).mu0;
      coord_[i].laguerre_lo = gauss_laguerre(64, k - 1.0);
      coord_[i].laguerre_hi = gauss_laguerre(64, k);
    }
  }
}

const GaussRule& KernelEvaluator::jacobi_rule(double kappa, int n) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto key = std::make_pair(static_cast<long long>(std::llround(kappa * 1e9)), n);
  auto it = jacobi_cache_.find(key);
  if (it == jacobi_cache_.end())
    it = jacobi_cache_.emplace(key, gauss_jacobi_probability(n, kappa - 1.0, kappa)).first;
  return it->second;
}

double KernelEvaluator::heat_factor(int coord, double xi, double yi,
                                    double inv4t) const {
  const CoordRule& cr = coord_[coord];
  if (cr.kappa == 0.0 || xi == 0.0) {
    double dd = xi - yi;
    return std::exp(-dd * dd * inv4t);
  }
  const double b = 2.0 * xi * yi * inv4t;  // x_i y_i / (2t)
  if (std::abs(b) <= 256.0) {
    const GaussRule& rule = jacobi_rule(cr.kappa, jacobi_bucket(b));
    double sum = 0.0;
    for (int m = 0; m < rule.size(); ++m) {
      double e = -(xi * xi + yi * yi - 2.0 * xi * yi * rule.nodes[m]) * inv4t;
      sum += rule.weights[m] * std::exp(e);
    }
    return sum;
  }
  // sharply concentrated exponential: Laguerre expansion at the near endpoint
  const double k = cr.kappa;
  const double ab = std::abs(b);
  double dd = (b > 0) ? (xi - yi) : (xi + yi);
  double front = std::exp(-dd * dd * inv4t) / cr.mu0;
  double sum = 0.0;
  if (b > 0) {
    const GaussRule& lr = cr.laguerre_lo;  // weight u^{k-1} e^{-u}
    for (int m = 0; m < lr.size(); ++m) {
      double rest = 2.0 - lr.nodes[m] / ab;
      if (rest <= 0.0) continue;
      sum += lr.weights[m] * std::pow(rest, k);
    }
    return front * std::pow(ab, -k) * sum;
  }
  const GaussRule& lr = cr.laguerre_hi;  // weight u^{k} e^{-u}
  for (int m = 0; m < lr.size(); ++m) {
    double rest = 2.0 - lr.nodes[m] / ab;
    if (rest <= 0.0) continue;
    sum += lr.weights[m] * std::pow(rest, k - 1.0);
  }
  return front * std::pow(ab, -(k + 1.0)) * sum;
}

double KernelEvaluator::heat_kernel(double t, const Vec& x, const Vec& y) const {
  if (!(t > 0.0)) throw InvalidArgument("heat_kernel: t must be > 0");
  const double inv4t = 1.0 / (4.0 * t);
  double prod = 1.0;
  for (int i = 0; i < measure_.dimension(); ++i)
    prod *= heat_factor(i, x[i], y[i], inv4t);
  return std::pow(2.0 * t, -hom_dim_ / 2.0) / c_kappa_ * prod;
}

double KernelEvaluator::radial_translate(
    const std::function<double(double)>& profile, const Vec& x, const Vec& y,
    int nodes) const {
  if (nodes <= 0) nodes = std::max(128, config_.mu_nodes);
  double x2y2 = x.squaredNorm() + y.squaredNorm();
  auto f = [&](const Vec& eta) {
    double arg = x2y2 + 2.0 * y.dot(eta);
    return profile(std::sqrt(std::max(0.0, arg)));
  };
  return tensor_mu(x, f, nodes);
}

double KernelEvaluator::tensor_mu(const Vec& x,
                                  const std::function<double(const Vec&)>& f,
                                  int nodes) const {
  const int n = measure_.dimension();
  // per-coordinate node/weight arrays (Dirac factors collapse to one node)
  std::vector<const GaussRule*> rules(n, nullptr);
  std::vector<int> sizes(n, 1);
  for (int i = 0; i < n; ++i) {
    if (coord_[i].kappa > 0.0 && x[i] != 0.0) {
      rules[i] = &jacobi_rule(coord_[i].kappa, nodes);
      sizes[i] = rules[i]->size();
    }
  }
  Vec eta(n);
  std::vector<int> idx(n, 0);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      if (rules[i]) {
        eta[i] = x[i] * rules[i]->nodes[idx[i]];
        w *= rules[i]->weights[idx[i]];
      } else {
        eta[i] = x[i];
      }
    }
    total += w * f(eta);
    int c = 0;
    while (c < n && ++idx[c] == sizes[c]) idx[c++] = 0;
    if (c == n) break;
  }
  return total;
}

KernelValue KernelEvaluator::tensor_mu_doubling(
    const Vec& x, const std::function<double(const Vec&)>& f) const {
  const int cap = measure_.dimension() == 1 ? config_.mu_nodes_max_1d
                                            : config_.mu_nodes_max_nd;
  int n = config_.mu_nodes;
  double prev = tensor_mu(x, f, n);
  while (true) {
    int n2 = 2 * n;
    if (n2 > cap) {
      return {prev, std::abs(prev) * config_.quad_rel_tol * 10, false, false};
    }
    double cur = tensor_mu(x, f, n2);
    double err = std::abs(cur - prev);
    if (err <= config_.quad_rel_tol * std::max(std::abs(cur), 1e-300))
      return {cur, err, true, false};
    prev = cur;
    n = n2;
  }
}

double KernelEvaluator::guarded_distance(const Vec& x, const Vec& y) const {
  double d = measure_.group().orbit_distance(x, y);
  double floor = std::max(config_.sing_abs, config_.sing_rel * (x - y).norm());
  if (d <= floor)
    throw SingularPair("riesz kernel: pair on (or too close to) the orbit diagonal");
  return d;
}

KernelValue KernelEvaluator::riesz_subordination(int j, const Vec& x,
                                                 const Vec& y) const {
  if (j < 0 || j >= measure_.dimension())
    throw InvalidArgument("riesz: coordinate index out of range");
  const double d = guarded_distance(x, y);
  const double dj = y[j] - x[j];
  if (dj == 0.0) return {0.0, 0.0, true, false};

  const double t0 = d * d;
  const double lnt0 = std::log(t0);
  // effective support: e^{-d^2/(4t)} dies below v = -7; algebraic decay
  // t^{-(homdim+1)/2 - 1/2}... gives the upper window
  const double w_lo = 7.0;
  const double w_hi = std::max(16.0, 76.0 / (hom_dim_ + 1.0));

  auto g_of_u = [&](double u) {
    double t = std::exp(u);
    return dj / 2.0 * heat_kernel(t, x, y) / std::sqrt(t);  // g(t) * t (du = dt/t)
  };

  auto eval = [&](int n) {
    const GaussRule& rule = gauss_legendre(n);
    double total = 0.0;
    for (auto [lo, hi] : {std::pair{lnt0 - w_lo, lnt0}, std::pair{lnt0, lnt0 + w_hi}}) {
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      double s = 0.0;
      for (int m = 0; m < rule.size(); ++m)
        s += rule.weights[m] * g_of_u(mid + half * rule.nodes[m]);
      total += half * s;
    }
    return total;
  };

  int n = config_.sub_nodes;
  double prev = eval(n);
  while (true) {
    int n2 = 2 * n;
    if (n2 > config_.sub_nodes_max)
      return {-c1_ * prev, std::abs(prev) * config_.sub_rel_tol * 10, false, false};
    double cur = eval(n2);
    double err = std::abs(cur - prev);
    if (err <= config_.sub_rel_tol * std::max(std::abs(cur), 1e-300))
      return {-c1_ * cur, c1_ * err, true, false};
    prev = cur;
    n = n2;
  }
}

KernelValue KernelEvaluator::riesz_closed(int j, const Vec& x, const Vec& y) const {
  if (j < 0 || j >= measure_.dimension())
    throw InvalidArgument("riesz: coordinate index out of range");
  guarded_distance(x, y);
  const double dj = y[j] - x[j];
  if (dj == 0.0) return {0.0, 0.0, true, false};
  const double mp = -p_kappa_ / 2.0;
  KernelValue kv = tensor_mu_doubling(
      x, [&](const Vec& eta) { return std::pow(a_squared(x, y, eta), mp); });
  double scale = d_kappa_ / c_kappa_ * dj;
  kv.value *= -scale;
  kv.est_error *= std::abs(scale);
  return kv;
}

KernelValue KernelEvaluator::riesz_explicit(int j, const Vec& x, const Vec& y) const {
  if (j < 0 || j >= measure_.dimension())
    throw InvalidArgument("riesz: coordinate index out of range");
  guarded_distance(x, y);
  const double p = p_kappa_;
  const double mp = -p / 2.0;

  KernelValue k1 = tensor_mu_doubling(x, [&](const Vec& eta) {
    return (eta[j] - y[j]) * std::pow(a_squared(x, y, eta), mp);
  });
  double value = k1.value;
  double err = k1.est_error;
  bool converged = k1.converged;
  bool flagged = false;

  const double kj = coord_[j].kappa;
  if (kj > 0.0) {
    // only alpha = sqrt(2) e_j has alpha_j != 0 in a Z2^N system
    double yj = y[j];
    double scale_y = std::max(1.0, y.norm());
    if (std::abs(yj) < config_.hyperplane_eps * scale_y) {
      // difference-quotient limit across the hyperplane: symmetric probe
      yj = config_.hyperplane_eps * scale_y;
      flagged = true;
    }
    Vec yp = y, ym = y;
    yp[j] = yj;
    ym[j] = -yj;
    const double me = (2.0 - p) / 2.0;
    KernelValue ka = tensor_mu_doubling(x, [&](const Vec& eta) {
      return std::pow(a_squared(x, yp, eta), me) - std::pow(a_squared(x, ym, eta), me);
    });
    double coef = kj * std::sqrt(2.0) / (p - 2.0) / (std::sqrt(2.0) * yj);
    value += coef * ka.value;
    err += std::abs(coef) * ka.est_error;
    converged = converged && ka.converged;
  }
  double scale = d_kappa_ / c_kappa_;
  return {scale * value, scale * err, converged, flagged};
}

double KernelEvaluator::explicit_formula_ratio(int j, const Vec& x,
                                               const Vec& y) const {
  double raw = riesz_explicit(j, x, y).value * c_kappa_;
  double sub = riesz_subordination(j, x, y).value;
  return raw / sub;
}

}  // namespace dunkl
