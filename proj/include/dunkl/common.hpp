#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dunkl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad user input (invalid κ, zero root vector, mismatched grids, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

/// Group closure did not terminate within the requested order.
struct GroupTooLarge : Error {
  using Error::Error;
};

/// A region does not contain enough grid samples to be resolved.
struct InsufficientResolution : Error {
  using Error::Error;
};

/// Kernel evaluation requested on (or too close to) the orbit diagonal.
struct SingularPair : Error {
  using Error::Error;
};

/// Operation not available for this group (no explicit intertwining measure).
struct NotImplemented : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Quadrature result
// ---------------------------------------------------------------------------

/// Value + error estimate of a numerical integral. `converged` is false when
/// the evaluation budget ran out before the tolerance was met; the best
/// estimate is still carried.
struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;

  double relative_error() const {
    double scale = std::abs(value);
    return scale > 0 ? error / scale : error;
  }
};

// ---------------------------------------------------------------------------
// Deterministic RNG
// ---------------------------------------------------------------------------

/// SplitMix64. Streams are derived from (seed, stream) so per-sample work can
/// be farmed out to workers without changing the numbers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) {
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal (Box-Muller).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Vec uniform_vec(int n, double lo, double hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Parallel loop
// ---------------------------------------------------------------------------

/// Runs fn(i) for i in [0, n). Results must be written to per-index storage;
/// the chunking is independent of the worker count so outputs are identical
/// for any `workers`.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  for (std::size_t w = 0; w < k; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += k) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace dunkl
