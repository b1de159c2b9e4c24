#include "dunkl/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dunkl {

GridFunction::GridFunction(WeightedMeasure measure, const Vec& lo, const Vec& hi,
                           int cells_per_axis,
                           const std::function<double(const Vec&)>& fn)
    : measure_(std::move(measure)), lo_(lo), hi_(hi), cells_(cells_per_axis) {
  const int n = measure_.dimension();
  if (lo.size() != n || hi.size() != n)
    throw InvalidArgument("grid: box dimension mismatch");
  if (cells_ < 2) throw InvalidArgument("grid: need at least 2 cells per axis");
  for (int i = 0; i < n; ++i)
    if (!(lo[i] < hi[i])) throw InvalidArgument("grid: empty box");

  long total = 1;
  for (int i = 0; i < n; ++i) total *= cells_;
  cell_vol_ = 1.0;
  Vec h(n);
  for (int i = 0; i < n; ++i) {
    h[i] = (hi[i] - lo[i]) / cells_;
    cell_vol_ *= h[i];
  }

  sites_.reserve(total);
  values_.resize(total);
  weights_.resize(total);
  std::vector<int> idx(n, 0);
  for (long s = 0; s < total; ++s) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (idx[i] + 0.5) * h[i];
    double w = measure_.weight_density(x) * cell_vol_;
    if (!(w > 0.0))
      throw InvalidArgument(
          "grid: cell center on a root hyperplane; shift the box or change the "
          "resolution");
    sites_.push_back(x);
    values_[s] = fn(x);
    weights_[s] = w;
    int c = 0;
    while (c < n && ++idx[c] == cells_) idx[c++] = 0;
  }
}

GridFunction GridFunction::with_values(Vec values) const {
  if (values.size() != values_.size())
    throw InvalidArgument("grid: value vector size mismatch");
  GridFunction g(*this);
  g.values_ = std::move(values);
  return g;
}

bool GridFunction::same_grid(const GridFunction& other) const {
  return cells_ == other.cells_ && dimension() == other.dimension() &&
         (lo_ - other.lo_).isZero(0.0) && (hi_ - other.hi_).isZero(0.0);
}

std::vector<int> GridFunction::region_indices(const Region& region) const {
  std::vector<int> out;
  if (std::holds_alternative<Ball>(region)) {
    const Ball& b = std::get<Ball>(region);
    for (int i = 0; i < size(); ++i)
      if ((sites_[i] - b.center).norm() < b.radius) out.push_back(i);
  } else {
    const Ball& b = std::get<OrbitBall>(region).base;
    const ReflectionGroup& g = measure_.group();
    for (int i = 0; i < size(); ++i)
      if (g.orbit_distance(b.center, sites_[i]) < b.radius) out.push_back(i);
  }
  return out;
}

double GridFunction::interpolate(const Vec& x) const {
  const int n = dimension();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  for (int i = 0; i < n; ++i) {
    double h = (hi_[i] - lo_[i]) / cells_;
    double u = (x[i] - lo_[i]) / h - 0.5;  // site index coordinate
    if (u < 0.0 || u > cells_ - 1)
      throw InvalidArgument("interpolate: point outside the site hull");
    int b = std::min(static_cast<int>(u), cells_ - 2);
    base[i] = b;
    frac[i] = u - b;
    if (frac[i] < 1e-9) frac[i] = 0.0;  // snap to the lattice
    if (frac[i] > 1.0 - 1e-9) frac[i] = 1.0;
  }
  // multilinear over the 2^n surrounding sites (site index = sum idx_i * cells^i)
  double out = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    long flat = 0, stride = 1;
    for (int i = 0; i < n; ++i) {
      int bit = (corner >> i) & 1;
      w *= bit ? frac[i] : 1.0 - frac[i];
      flat += (base[i] + bit) * stride;
      stride *= cells_;
    }
    out += w * values_[flat];
  }
  return out;
}

namespace {

struct RegionStats {
  std::vector<int> idx;
  double mass = 0.0;
};

RegionStats resolve_region(const GridFunction& f, const Region& region) {
  RegionStats rs;
  rs.idx = f.region_indices(region);
  if (static_cast<int>(rs.idx.size()) < kMinRegionSites)
    throw InsufficientResolution("region holds fewer than 8 grid sites");
  for (int i : rs.idx) rs.mass += f.weights()[i];
  return rs;
}

double radius_of(const Region& r) {
  return std::holds_alternative<Ball>(r) ? std::get<Ball>(r).radius
                                         : std::get<OrbitBall>(r).base.radius;
}

}  // namespace

double ball_average(const GridFunction& f, const Region& region) {
  if (!(radius_of(region) > 0.0)) throw InvalidArgument("region: radius must be > 0");
  RegionStats rs = resolve_region(f, region);
  double s = 0.0;
  for (int i : rs.idx) s += f.weights()[i] * f.values()[i];
  return s / rs.mass;
}

double oscillation(const GridFunction& f, const Region& region) {
  RegionStats rs = resolve_region(f, region);
  double s = 0.0;
  for (int i : rs.idx) s += f.weights()[i] * f.values()[i];
  double avg = s / rs.mass;
  double o = 0.0;
  for (int i : rs.idx) o += f.weights()[i] * std::abs(f.values()[i] - avg);
  return o / rs.mass;
}

namespace {

OscRow make_row(const GridFunction& f, const Ball& b, BmoMode mode) {
  OscRow row;
  row.ball = b;
  row.mode = mode;
  Region region = mode == BmoMode::euclidean ? Region(b) : Region(OrbitBall{b});
  try {
    row.average = ball_average(f, region);
    row.oscillation = oscillation(f, region);
    row.resolved = true;
  } catch (const InsufficientResolution&) {
    row.resolved = false;
  }
  return row;
}

void fill_buckets(OscillationReport& rep, const std::vector<double>& radius_edges,
                  const std::vector<double>& distance_edges) {
  auto bucketize = [](const std::vector<double>& edges) {
    std::vector<OscBucket> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
      out.push_back({edges[i], edges[i + 1], 0.0, 0});
    return out;
  };
  rep.by_radius = bucketize(radius_edges);
  rep.by_distance = bucketize(distance_edges);
  for (const OscRow& row : rep.rows) {
    if (!row.resolved) continue;
    for (OscBucket& b : rep.by_radius)
      if (row.ball.radius >= b.lo && row.ball.radius < b.hi) {
        b.sup = std::max(b.sup, row.oscillation);
        ++b.count;
      }
    double dist = row.ball.center.norm();
    for (OscBucket& b : rep.by_distance)
      if (dist >= b.lo && dist < b.hi) {
        b.sup = std::max(b.sup, row.oscillation);
        ++b.count;
      }
  }
}

}  // namespace

OscillationReport bmo_norm(const GridFunction& f, BmoMode mode,
                           const std::vector<Ball>& family) {
  if (family.empty()) throw InvalidArgument("bmo_norm: empty ball family");
  OscillationReport rep;
  double rmin = family[0].radius, rmax = family[0].radius, dmax = 0.0;
  for (const Ball& b : family) {
    rep.rows.push_back(make_row(f, b, mode));
    rmin = std::min(rmin, b.radius);
    rmax = std::max(rmax, b.radius);
    dmax = std::max(dmax, b.center.norm());
  }
  for (const OscRow& row : rep.rows) {
    if (row.resolved)
      rep.sup_oscillation = std::max(rep.sup_oscillation, row.oscillation);
    else
      ++rep.skipped;
  }
  // dyadic summary buckets spanning the family
  std::vector<double> redges, dedges;
  for (double r = rmin; r < rmax * 2; r *= 2) redges.push_back(r * 0.999);
  redges.push_back(rmax * 2);
  for (int i = 0; i <= 4; ++i) dedges.push_back(dmax * i / 4.0 + (i == 4 ? 1e-9 : 0.0));
  fill_buckets(rep, redges, dedges);
  return rep;
}

OscillationReport vmo_profile(const GridFunction& f, BmoMode mode,
                              const std::vector<Ball>& family,
                              const std::vector<double>& radius_edges,
                              const std::vector<double>& distance_edges) {
  if (family.empty()) throw InvalidArgument("vmo_profile: empty ball family");
  if (radius_edges.size() < 2 || distance_edges.size() < 2)
    throw InvalidArgument("vmo_profile: need at least one bucket per axis");
  OscillationReport rep;
  for (const Ball& b : family) rep.rows.push_back(make_row(f, b, mode));
  for (const OscRow& row : rep.rows) {
    if (row.resolved)
      rep.sup_oscillation = std::max(rep.sup_oscillation, row.oscillation);
    else
      ++rep.skipped;
  }
  fill_buckets(rep, radius_edges, distance_edges);
  return rep;
}

double median_value(const GridFunction& f, const Region& region) {
  RegionStats rs = resolve_region(f, region);
  std::vector<std::pair<double, double>> vw;  // (value, weight) sorted
  vw.reserve(rs.idx.size());
  for (int i : rs.idx) vw.push_back({f.values()[i], f.weights()[i]});
  std::sort(vw.begin(), vw.end());
  const double half = 0.5 * rs.mass;
  // prefix[i] = mass strictly below vw[i].value
  double below = 0.0;
  for (std::size_t i = 0; i < vw.size();) {
    std::size_t jend = i;
    double tie = 0.0;
    while (jend < vw.size() && vw[jend].first == vw[i].first) tie += vw[jend++].second;
    double above = rs.mass - below - tie;
    if (below <= half && above <= half) return vw[i].first;  // lower median
    below += tie;
    i = jend;
  }
  throw Error("median_value: no admissible median (unreachable)");
}

MedianSplit median_split(const GridFunction& b, const Ball& ball,
                         const Ball& companion) {
  MedianSplit ms;
  Region rb{ball}, rc{companion};
  ms.median = median_value(b, rc);
  RegionStats in_b = resolve_region(b, rb);
  RegionStats in_c = resolve_region(b, rc);
  double mass_f1 = 0.0, mass_f2 = 0.0, max_cell = 0.0;
  for (int i : in_c.idx) {
    max_cell = std::max(max_cell, b.weights()[i]);
    if (b.values()[i] <= ms.median) {
      ms.f1.push_back(i);
      mass_f1 += b.weights()[i];
    }
    if (b.values()[i] >= ms.median) {
      ms.f2.push_back(i);
      mass_f2 += b.weights()[i];
    }
  }
  if (mass_f1 < 0.5 * in_c.mass - max_cell || mass_f2 < 0.5 * in_c.mass - max_cell)
    throw InsufficientResolution("median_split: level-set mass deficit beyond one cell");
  for (int i : in_b.idx) {
    if (b.values()[i] >= ms.median)
      ms.e1.push_back(i);
    else
      ms.e2.push_back(i);
  }
  return ms;
}

namespace {

MaximalResult sup_over_radii(const GridFunction& f, MaximalKind kind,
                             const std::vector<double>& radii, bool use_oscillation) {
  if (radii.empty()) throw InvalidArgument("maximal: empty radius family");
  GridFunction absf =
      use_oscillation ? f : f.with_values(f.values().array().abs().matrix());
  Vec out = Vec::Constant(f.size(), -std::numeric_limits<double>::infinity());
  std::vector<bool> radius_used(radii.size(), false);
  for (std::size_t r = 0; r < radii.size(); ++r) {
    for (int i = 0; i < f.size(); ++i) {
      Ball ball{f.sites()[i], radii[r]};
      Region region =
          kind == MaximalKind::euclidean ? Region(ball) : Region(OrbitBall{ball});
      try {
        double v = use_oscillation ? oscillation(f, region) : ball_average(absf, region);
        out[i] = std::max(out[i], v);
        radius_used[r] = true;
      } catch (const InsufficientResolution&) {
      }
    }
  }
  MaximalResult res{absf.with_values(out), {}};
  for (std::size_t r = 0; r < radii.size(); ++r)
    if (!radius_used[r]) res.skipped_radii.push_back(radii[r]);
  for (int i = 0; i < f.size(); ++i)
    if (!std::isfinite(out[i]))
      throw InsufficientResolution("maximal: a site resolved no radius in the family");
  return res;
}

}  // namespace

MaximalResult maximal_fn(const GridFunction& f, MaximalKind kind,
                         const std::vector<double>& radii) {
  return sup_over_radii(f, kind, radii, false);
}

MaximalResult sharp_fn(const GridFunction& f, const std::vector<double>& radii) {
  return sup_over_radii(f, MaximalKind::euclidean, radii, true);
}

TranslationModulus translation_modulus(const GridFunction& f, const Vec& z,
                                       double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("translation_modulus: need p in (1, inf)");
  if (z.size() != f.dimension())
    throw InvalidArgument("translation_modulus: offset dimension mismatch");
  TranslationModulus tm;
  double acc = 0.0, clipped_acc = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    Vec target = f.sites()[i] + z;
    bool inside = true;
    for (int c = 0; c < f.dimension(); ++c) {
      double h = (f.box_hi()[c] - f.box_lo()[c]) / f.cells_per_axis();
      double u = (target[c] - f.box_lo()[c]) / h - 0.5;
      if (u < 0.0 || u > f.cells_per_axis() - 1) {
        inside = false;
        break;
      }
    }
    if (!inside) {
      ++tm.clipped;
      clipped_acc += f.weights()[i] * std::pow(std::abs(f.values()[i]), p);
      continue;
    }
    double shifted = f.interpolate(target);
    acc += f.weights()[i] * std::pow(std::abs(shifted - f.values()[i]), p);
  }
  tm.value = std::pow(acc, 1.0 / p);
  tm.clipped_bound = std::pow(clipped_acc, 1.0 / p);
  return tm;
}

std::function<double(const Vec&)> preset_function(const std::string& name) {
  if (name == "constant") return [](const Vec&) { return 1.0; };
  if (name == "sign") return [](const Vec& x) { return x[0] >= 0.0 ? 1.0 : -1.0; };
  if (name == "sign-split")
    return [](const Vec& x) { return x[0] >= 0.3 ? 1.0 : -1.0; };
  if (name == "lipschitz-bump")
    return [](const Vec& x) { return std::max(0.0, 1.0 - x.norm()); };
  if (name == "gauss-bump")
    return [](const Vec& x) { return std::exp(-x.squaredNorm()); };
  if (name == "log-abs")
    return [](const Vec& x) { return std::log(std::max(x.norm(), 1e-300)); };
  if (name == "log-abs-m1")
    return [](const Vec& x) {
      Vec e1 = Vec::Zero(x.size());
      e1[0] = 1.0;
      return std::log(std::max((x - e1).norm(), 1e-300));
    };
  throw InvalidArgument("unknown preset: " + name);
}

}  // namespace dunkl
