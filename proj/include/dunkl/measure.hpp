#pragma once

#include <cstdint>

#include "dunkl/common.hpp"
#include "dunkl/reflection.hpp"

namespace dunkl {

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// O(B) = union of B(sigma(center), radius) over the group
///      = { y : d(center, y) < radius }.
struct OrbitBall {
  Ball base;
};

struct MeasureOptions {
  double rel_tol = 1e-3;
  int max_intervals = 20000;      // adaptive budget (N <= 2)
  long mc_budget = 4'000'000;     // sample budget (N == 3, orbit balls N >= 2)
  std::uint64_t seed = 1;
};

/// The measure with density prod_{alpha in R} |<alpha,x>|^{kappa(alpha)}.
/// Pure evaluators; safe for concurrent use after construction.
class WeightedMeasure {
 public:
  WeightedMeasure(RootSystemSpec spec, ReflectionGroup group);

  const RootSystemSpec& spec() const { return spec_; }
  const ReflectionGroup& group() const { return group_; }
  int dimension() const { return spec_.dimension(); }

  /// N + sum over R of kappa(alpha).
  double homogeneous_dimension() const { return hom_dim_; }

  double weight_density(const Vec& x) const;

  /// omega(B) by adaptive quadrature (N <= 2) or stratified Monte Carlo
  /// (N == 3). `converged` is false when the budget ran out first.
  IntegralResult ball_measure(const Ball& b, const MeasureOptions& opt = {}) const;

  /// omega(O(B)): overlaps counted once. Exact interval merging for N == 1,
  /// stratified Monte Carlo with the orbit-distance membership test otherwise.
  IntegralResult orbit_ball_measure(const OrbitBall& ob,
                                    const MeasureOptions& opt = {}) const;

  /// V(x,y,r) = max{omega(B(x,r)), omega(B(y,r))}.
  IntegralResult v_max(const Vec& x, const Vec& y, double r,
                       const MeasureOptions& opt = {}) const;

 private:
  IntegralResult ball_measure_1d(const Ball& b, const MeasureOptions& opt) const;
  IntegralResult ball_measure_2d(const Ball& b, const MeasureOptions& opt) const;
  IntegralResult mc_measure(const Vec& lo, const Vec& hi,
                            const std::function<bool(const Vec&)>& inside,
                            const MeasureOptions& opt) const;

  RootSystemSpec spec_;
  ReflectionGroup group_;
  double hom_dim_;
};

}  // namespace dunkl
