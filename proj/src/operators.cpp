#include "dunkl/operators.hpp"

#include <atomic>
#include <cmath>

namespace dunkl {

DiscretizedOperator assemble_riesz(const KernelEvaluator& ke, const GridFunction& grid,
                                   int j, double eps_trunc,
                                   const AssembleOptions& opt) {
  if (!(eps_trunc > 0.0))
    throw InvalidArgument("assemble_riesz: eps_trunc must be > 0");
  const int n = grid.size();
  DiscretizedOperator op;
  op.matrix = Mat::Zero(n, n);
  op.eps_trunc = eps_trunc;
  op.component = j;

  const ReflectionGroup& g = grid.measure().group();
  std::atomic<long> excluded{0};
  parallel_for(n, opt.workers, [&](std::size_t i) {
    long local = 0;
    const Vec& xi = grid.sites()[i];
    for (int k = 0; k < n; ++k) {
      const Vec& yk = grid.sites()[k];
      if (g.orbit_distance(xi, yk) <= eps_trunc) {
        ++local;
        continue;
      }
      try {
        KernelValue kv;
        switch (opt.route) {
          case RieszRoute::closed:
            kv = ke.riesz_closed(j, xi, yk);
            break;
          case RieszRoute::explicit_formula:
            kv = ke.riesz_explicit(j, xi, yk);
            break;
          case RieszRoute::subordination:
            kv = ke.riesz_subordination(j, xi, yk);
            break;
        }
        op.matrix(i, k) = kv.value * grid.weights()[k];
      } catch (const SingularPair&) {
        ++local;
      }
    }
    excluded += local;
  });
  op.excluded = excluded.load();
  return op;
}

GridFunction apply(const DiscretizedOperator& T, const GridFunction& grid,
                   const GridFunction& f) {
  if (!grid.same_grid(f) || T.matrix.rows() != f.size())
    throw InvalidArgument("apply: grid mismatch");
  return f.with_values(T.matrix * f.values());
}

GridFunction commutator_apply(const DiscretizedOperator& T, const GridFunction& b,
                              const GridFunction& f) {
  if (!b.same_grid(f) || T.matrix.rows() != f.size())
    throw InvalidArgument("commutator_apply: grid mismatch");
  Vec tf = T.matrix * f.values();
  Vec tbf = T.matrix * b.values().cwiseProduct(f.values()).eval();
  return f.with_values(b.values().cwiseProduct(tf) - tbf);
}

Mat commutator_matrix(const DiscretizedOperator& T, const GridFunction& b) {
  const int n = static_cast<int>(T.matrix.rows());
  Mat C(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      C(i, k) = (b.values()[i] - b.values()[k]) * T.matrix(i, k);
  return C;
}

std::vector<GridFunction> maximal_truncated(const KernelEvaluator& ke,
                                            const GridFunction& grid, int j,
                                            const GridFunction& f,
                                            const std::vector<double>& truncations) {
  if (truncations.empty())
    throw InvalidArgument("maximal_truncated: empty truncation set");
  for (double t : truncations)
    if (!(t > 0.0)) throw InvalidArgument("maximal_truncated: truncations must be > 0");
  const int n = grid.size();
  const auto& elements = grid.measure().group().elements();

  // row of kernel values R_j(x_i, x_k) w_k, singular pairs excluded
  Mat rows = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      try {
        rows(i, k) = ke.riesz_closed(j, grid.sites()[i], grid.sites()[k]).value *
                     grid.weights()[k];
      } catch (const SingularPair&) {
      }
    }

  std::vector<GridFunction> out;
  out.reserve(elements.size());
  for (const Mat& sigma : elements) {
    Vec vals(n);
    for (int i = 0; i < n; ++i) {
      Vec sx = sigma * grid.sites()[i];
      double best = 0.0;
      for (double t : truncations) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k)
          if ((sx - grid.sites()[k]).norm() > t) acc += rows(i, k) * f.values()[k];
        best = std::max(best, std::abs(acc));
      }
      vals[i] = best;
    }
    out.push_back(f.with_values(vals));
  }
  return out;
}

double lp_norm(const GridFunction& f, double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("lp_norm: need p in (1, inf)");
  double acc = 0.0;
  for (int i = 0; i < f.size(); ++i)
    acc += f.weights()[i] * std::pow(std::abs(f.values()[i]), p);
  return std::pow(acc, 1.0 / p);
}

namespace {

double weighted_p_norm(const Vec& v, const Vec& w, double p) {
  double acc = 0.0;
  for (int i = 0; i < v.size(); ++i) acc += w[i] * std::pow(std::abs(v[i]), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

NormEstimate op_norm_estimate(const Mat& A, const GridFunction& grid, double p,
                              int trials, std::uint64_t seed) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("op_norm_estimate: need p in (1, inf)");
  const int n = static_cast<int>(A.rows());
  const Vec& w = grid.weights();

  if (p == 2.0) {
    // power iteration on W^{-1} A^T W A with the W-inner product
    Rng rng(seed, 0x547);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    double vn = std::sqrt(v.dot(w.cwiseProduct(v)));
    if (vn == 0) vn = 1;
    v /= vn;
    double lambda = 0.0;
    NormEstimate est;
    est.converged = false;
    for (int it = 1; it <= 600; ++it) {
      Vec av = A * v;
      Vec bv = (A.transpose() * w.cwiseProduct(av)).cwiseQuotient(w);
      double next = v.dot(w.cwiseProduct(bv));  // Rayleigh quotient, |v|_W = 1
      double bn = std::sqrt(bv.dot(w.cwiseProduct(bv)));
      est.iterations = it;
      if (bn == 0.0) {
        // A v is numerically zero: operator (restricted) is null
        est.value = 0.0;
        est.converged = true;
        return est;
      }
      v = bv / bn;
      if (it > 4 && std::abs(next - lambda) <= 1e-6 * std::max(next, 1e-300)) {
        lambda = next;
        est.converged = true;
        break;
      }
      lambda = next;
    }
    est.value = std::sqrt(std::max(0.0, lambda));
    return est;
  }

  // p != 2: maximize the ratio over seeded random + structured test functions
  NormEstimate est;
  est.lower_estimate_only = true;
  auto ratio = [&](const Vec& f) {
    double fn = weighted_p_norm(f, w, p);
    if (fn == 0.0) return 0.0;
    return weighted_p_norm(A * f, w, p) / fn;
  };
  // structured candidates: constant, coordinate signs, a centered indicator
  est.value = std::max(est.value, ratio(Vec::Ones(n)));
  {
    Vec s(n);
    for (int i = 0; i < n; ++i) s[i] = grid.sites()[i][0] >= 0 ? 1.0 : -1.0;
    est.value = std::max(est.value, ratio(s));
    Vec ind = Vec::Zero(n);
    Vec mid = 0.5 * (grid.box_lo() + grid.box_hi());
    double r = 0.25 * (grid.box_hi()[0] - grid.box_lo()[0]);
    for (int i = 0; i < n; ++i)
      if ((grid.sites()[i] - mid).norm() < r) ind[i] = 1.0;
    est.value = std::max(est.value, ratio(ind));
  }
  Rng rng(seed, 0x9'1e57);
  for (int t = 0; t < trials; ++t) {
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = rng.normal();
    est.value = std::max(est.value, ratio(f));
    est.iterations = t + 1;
  }
  return est;
}

}  // namespace dunkl
