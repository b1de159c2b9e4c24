#pragma once

#include <functional>
#include <vector>

#include "dunkl/common.hpp"

namespace dunkl {

/// Nodes and weights of a one-dimensional quadrature rule.
struct GaussRule {
  Vec nodes;
  Vec weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre rule on [-1,1] with physical weights (sum = 2).
/// Rules are computed once per node count and cached.
const GaussRule& gauss_legendre(int n);

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1,1], with the
/// weights normalized to sum to one (a probability rule). Requires a,b > -1.
GaussRule gauss_jacobi_probability(int n, double a, double b);

/// Generalized Gauss-Laguerre rule for the weight x^alpha e^{-x} on [0,inf)
/// with physical weights (sum = Gamma(alpha+1)). Requires alpha > -1.
GaussRule gauss_laguerre(int n, double alpha);

/// Maps a rule on [-1,1] to [lo,hi].
GaussRule mapped_to(const GaussRule& rule, double lo, double hi);

struct AdaptiveOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_intervals = 4000;
  /// Interior points where the integrand has kinks/cusps; the initial
  /// partition is cut there so singular behavior sits at interval endpoints.
  std::vector<double> split_points;
};

/// Adaptive Gauss quadrature of f over [a,b]: per-interval nested 15/31-point
/// estimates, bisection of the worst interval, error = sum of local
/// discrepancies. Handles integrable endpoint singularities via the split
/// mechanism (Gauss rules never evaluate at interval ends).
IntegralResult integrate(const std::function<double(double)>& f, double a,
                         double b, const AdaptiveOptions& opt = {});

}  // namespace dunkl
