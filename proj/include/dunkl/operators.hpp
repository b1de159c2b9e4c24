#pragma once

#include <cstdint>

#include "dunkl/kernels.hpp"
#include "dunkl/spaces.hpp"

namespace dunkl {

/// Dense discretization of a singular kernel against the grid quadrature:
///   T[i][k] = kernel(x_i, x_k) * w_k,   zeroed where d(x_i, x_k) <= eps_trunc.
struct DiscretizedOperator {
  Mat matrix;
  double eps_trunc = 0.0;
  int component = 0;   // the j of R_j
  long excluded = 0;   // near-diagonal (or singular) pairs excluded
};

enum class RieszRoute { closed, explicit_formula, subordination };

struct AssembleOptions {
  RieszRoute route = RieszRoute::closed;
  int workers = 1;
};

/// Assembles R_j on the grid with orbit-distance truncation. Kernel
/// singular-pair errors become exclusions, never failures.
DiscretizedOperator assemble_riesz(const KernelEvaluator& ke, const GridFunction& grid,
                                   int j, double eps_trunc,
                                   const AssembleOptions& opt = {});

/// Matrix-vector action on a grid function (grids must match).
GridFunction apply(const DiscretizedOperator& T, const GridFunction& grid,
                   const GridFunction& f);

/// [b, T] f = b (T f) - T (b f). Algebraically equal to applying the matrix
/// with entries (b_i - b_k) T[i][k].
GridFunction commutator_apply(const DiscretizedOperator& T, const GridFunction& b,
                              const GridFunction& f);

/// The factorized commutator matrix (b_i - b_k) T[i][k].
Mat commutator_matrix(const DiscretizedOperator& T, const GridFunction& b);

/// R*_j f(sigma(x_i)) = sup over the truncation set of
/// |sum_{|sigma(x_i) - x_k| > t} R_j(x_i, x_k) w_k f_k|, one grid function per
/// group element.
std::vector<GridFunction> maximal_truncated(const KernelEvaluator& ke,
                                            const GridFunction& grid, int j,
                                            const GridFunction& f,
                                            const std::vector<double>& truncations);

/// (sum_k w_k |f_k|^p)^{1/p}.
double lp_norm(const GridFunction& f, double p);

struct NormEstimate {
  double value = 0.0;
  bool converged = true;
  bool lower_estimate_only = false;  // true for p != 2 (max over test functions)
  int iterations = 0;
};

/// Operator norm of f -> A f on the weighted grid space.
/// p == 2: power iteration on the weighted normal matrix, relative 1e-6.
/// p != 2: max of ||Af||_p / ||f||_p over seeded random + structured test
/// functions; reported explicitly as a lower estimate.
NormEstimate op_norm_estimate(const Mat& A, const GridFunction& grid, double p,
                              int trials = 24, std::uint64_t seed = 1);

}  // namespace dunkl
