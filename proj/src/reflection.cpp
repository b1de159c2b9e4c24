#include "dunkl/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

namespace dunkl {

namespace {
constexpr double kMatchTol = 1e-10;
constexpr double kOrthoTol = 1e-12;

Mat reflection_matrix(const Vec& alpha) {
  int n = static_cast<int>(alpha.size());
  return Mat::Identity(n, n) - (2.0 / alpha.squaredNorm()) * alpha * alpha.transpose();
}

bool same_vector(const Vec& a, const Vec& b, double tol) {
  return (a - b).lpNorm<Eigen::Infinity>() <= tol;
}
}  // namespace

Vec reflect(const Vec& alpha, const Vec& x) {
  double n2 = alpha.squaredNorm();
  if (n2 == 0.0) throw InvalidArgument("reflect: zero root vector");
  return x - (2.0 * alpha.dot(x) / n2) * alpha;
}

RootSystemSpec::RootSystemSpec(int dimension, std::vector<Vec> roots,
                               std::vector<int> positive,
                               std::vector<double> multiplicity)
    : dimension_(dimension),
      roots_(std::move(roots)),
      positive_(std::move(positive)),
      kappa_(std::move(multiplicity)) {
  if (dimension_ <= 0) throw InvalidArgument("root system: dimension must be positive");
  if (kappa_.size() != roots_.size())
    throw InvalidArgument("root system: one multiplicity per root required");
  for (double k : kappa_)
    if (!(k >= 0.0)) throw InvalidArgument("root system: kappa must be >= 0");

  // normalize to <alpha,alpha> = 2
  for (Vec& r : roots_) {
    if (static_cast<int>(r.size()) != dimension_)
      throw InvalidArgument("root system: root dimension mismatch");
    double n2 = r.squaredNorm();
    if (n2 == 0.0) throw InvalidArgument("root system: zero root vector");
    r *= std::sqrt(2.0 / n2);
  }

  auto find_root = [&](const Vec& v) -> int {
    for (std::size_t i = 0; i < roots_.size(); ++i)
      if (same_vector(roots_[i], v, 1e-9)) return static_cast<int>(i);
    return -1;
  };

  // R = R+ u (-R+) disjointly
  if (!roots_.empty()) {
    if (positive_.size() * 2 != roots_.size())
      throw InvalidArgument("root system: |R+| must be |R|/2");
    std::vector<bool> seen(roots_.size(), false);
    for (int ip : positive_) {
      if (ip < 0 || ip >= static_cast<int>(roots_.size()))
        throw InvalidArgument("root system: positive index out of range");
      int im = find_root(-roots_[ip]);
      if (im < 0) throw InvalidArgument("root system: missing -alpha for a positive root");
      if (seen[ip] || seen[im] || ip == im)
        throw InvalidArgument("root system: R+ u (-R+) does not split R disjointly");
      seen[ip] = seen[im] = true;
    }
  }

  // closure under own reflections, and G-invariance of kappa under the
  // generating reflections (which implies invariance under all of G)
  for (std::size_t b = 0; b < roots_.size(); ++b) {
    for (std::size_t a = 0; a < roots_.size(); ++a) {
      Vec image = reflect(roots_[b], roots_[a]);
      int idx = find_root(image);
      if (idx < 0) {
        idx = find_root(-image);  // sign-normalized match
        if (idx < 0)
          throw InvalidArgument("root system: not closed under its own reflections");
      }
      if (std::abs(kappa_[idx] - kappa_[a]) > 1e-12)
        throw InvalidArgument("root system: multiplicity is not G-invariant");
    }
  }
}

RootSystemSpec RootSystemSpec::trivial(int dimension) {
  return RootSystemSpec(dimension, {}, {}, {});
}

RootSystemSpec RootSystemSpec::z2n(const std::vector<double>& kappa) {
  int n = static_cast<int>(kappa.size());
  if (n < 1) throw InvalidArgument("z2^n: need at least one coordinate");
  std::vector<Vec> roots;
  std::vector<int> positive;
  std::vector<double> mult;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = std::sqrt(2.0);
    positive.push_back(static_cast<int>(roots.size()));
    roots.push_back(e);
    mult.push_back(kappa[i]);
    roots.push_back(-e);
    mult.push_back(kappa[i]);
  }
  return RootSystemSpec(n, std::move(roots), std::move(positive), std::move(mult));
}

RootSystemSpec RootSystemSpec::dihedral(int m, double kappa_even, double kappa_odd) {
  if (m != 3 && m != 4 && m != 6)
    throw InvalidArgument("dihedral: supported orders are m in {3,4,6}");
  if (m % 2 == 1 && kappa_even != kappa_odd)
    throw InvalidArgument("dihedral: odd m has a single conjugacy class; kappa must match");
  std::vector<Vec> roots;
  std::vector<int> positive;
  std::vector<double> mult;
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < 2 * m; ++k) {
    Vec r(2);
    r << std::sqrt(2.0) * std::cos(k * pi / m), std::sqrt(2.0) * std::sin(k * pi / m);
    if (k < m) positive.push_back(k);
    roots.push_back(r);
    mult.push_back(k % 2 == 0 ? kappa_even : kappa_odd);
  }
  return RootSystemSpec(2, std::move(roots), std::move(positive), std::move(mult));
}

RootSystemSpec RootSystemSpec::direct_product(const RootSystemSpec& a,
                                              const RootSystemSpec& b) {
  int n = a.dimension() + b.dimension();
  std::vector<Vec> roots;
  std::vector<int> positive;
  std::vector<double> mult;
  auto embed = [&](const RootSystemSpec& s, int offset) {
    int base = static_cast<int>(roots.size());
    for (std::size_t i = 0; i < s.roots().size(); ++i) {
      Vec r = Vec::Zero(n);
      r.segment(offset, s.dimension()) = s.roots()[i];
      roots.push_back(r);
      mult.push_back(s.multiplicity(static_cast<int>(i)));
    }
    for (int ip : s.positive_roots()) positive.push_back(base + ip);
  };
  embed(a, 0);
  embed(b, a.dimension());
  return RootSystemSpec(n, std::move(roots), std::move(positive), std::move(mult));
}

double RootSystemSpec::gamma() const {
  double g = 0.0;
  for (double k : kappa_) g += k;
  return g;
}

bool RootSystemSpec::is_z2_product(std::vector<double>* coordinate_kappa) const {
  std::vector<double> ck(dimension_, 0.0);
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    const Vec& r = roots_[i];
    int axis = -1;
    for (int j = 0; j < dimension_; ++j) {
      if (std::abs(r[j]) > 1e-12) {
        if (axis >= 0) return false;  // not coordinate-aligned
        axis = j;
      }
    }
    if (axis < 0) return false;
    ck[axis] = kappa_[i];
  }
  if (coordinate_kappa) *coordinate_kappa = ck;
  return true;
}

std::string ReflectionGroup::key_of(const Mat& m) const {
  std::string key;
  key.reserve(static_cast<std::size_t>(m.size()) * 12);
  char buf[32];
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      // quantize at 1e-6 (products drift at ~1e-12 per multiply)
      long long q = std::llround(m(i, j) * 1e6);
      if (q == 0) q = 0;  // normalize -0
      std::snprintf(buf, sizeof buf, "%lld,", q);
      key += buf;
    }
  return key;
}

int ReflectionGroup::find(const Mat& m) const {
  auto it = index_.find(key_of(m));
  if (it != index_.end() &&
      (elements_[it->second] - m).lpNorm<Eigen::Infinity>() <= kMatchTol)
    return it->second;
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if ((elements_[i] - m).lpNorm<Eigen::Infinity>() <= kMatchTol)
      return static_cast<int>(i);
  return -1;
}

std::vector<Vec> ReflectionGroup::orbit(const Vec& x) const {
  std::vector<Vec> out;
  for (const Mat& g : elements_) {
    Vec y = g * x;
    bool dup = false;
    for (const Vec& z : out)
      if (same_vector(y, z, kMatchTol)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(y));
  }
  return out;
}

double ReflectionGroup::orbit_distance(const Vec& x, const Vec& y) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Mat& g : elements_) best = std::min(best, (x - g * y).norm());
  return best;
}

ReflectionGroup generate_group(const RootSystemSpec& spec, int max_order) {
  if (max_order < 2) throw InvalidArgument("generate_group: max_order must be >= 2");
  int n = spec.dimension();
  ReflectionGroup g;
  g.dimension_ = n;

  auto add = [&](const Mat& m) -> int {
    int idx = g.find(m);
    if (idx >= 0) return idx;
    g.elements_.push_back(m);
    idx = static_cast<int>(g.elements_.size()) - 1;
    g.index_.emplace(g.key_of(m), idx);
    return idx;
  };

  add(Mat::Identity(n, n));
  std::vector<Mat> gens;
  for (const Vec& alpha : spec.roots()) {
    Mat s = reflection_matrix(alpha);
    int idx = add(s);
    if (std::find(g.generators_.begin(), g.generators_.end(), idx) ==
        g.generators_.end()) {
      g.generators_.push_back(idx);
      gens.push_back(s);
    }
  }

  std::deque<int> work(g.elements_.size());
  for (std::size_t i = 0; i < g.elements_.size(); ++i) work[i] = static_cast<int>(i);
  while (!work.empty()) {
    Mat cur = g.elements_[work.front()];
    work.pop_front();
    for (const Mat& s : gens) {
      Mat prod = cur * s;
      if (g.find(prod) < 0) {
        if (static_cast<int>(g.elements_.size()) >= max_order)
          throw GroupTooLarge("generate_group: closure exceeds max_order (bad root system or drift)");
        work.push_back(add(prod));
      }
    }
  }

  // orthogonality screen
  for (const Mat& m : g.elements_) {
    if (((m.transpose() * m) - Mat::Identity(n, n)).lpNorm<Eigen::Infinity>() >
        kOrthoTol)
      throw Error("generate_group: element failed orthogonality check");
  }
  return g;
}

}  // namespace dunkl
