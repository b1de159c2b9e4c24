#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "dunkl/measure.hpp"

namespace dunkl {

using Region = std::variant<Ball, OrbitBall>;

/// A function sampled on a tensor-product lattice of cell centers, with
/// quadrature weights approximating domega (density times cell volume).
/// Immutable after construction.
class GridFunction {
 public:
  /// Uniform lattice of cells_per_axis^N cell centers over [lo,hi]^N.
  /// Throws if any cell center lands on a root hyperplane (weight would
  /// vanish); shift the box or change the resolution in that case.
  GridFunction(WeightedMeasure measure, const Vec& lo, const Vec& hi,
               int cells_per_axis, const std::function<double(const Vec&)>& fn);

  /// Same lattice, different values.
  GridFunction with_values(Vec values) const;

  int size() const { return static_cast<int>(values_.size()); }
  int dimension() const { return measure_.dimension(); }
  const WeightedMeasure& measure() const { return measure_; }
  const std::vector<Vec>& sites() const { return sites_; }
  const Vec& values() const { return values_; }
  const Vec& weights() const { return weights_; }
  const Vec& box_lo() const { return lo_; }
  const Vec& box_hi() const { return hi_; }
  int cells_per_axis() const { return cells_; }
  double cell_volume() const { return cell_vol_; }

  bool same_grid(const GridFunction& other) const;

  /// Indices of sites inside the region (Euclidean ball or orbit ball).
  std::vector<int> region_indices(const Region& region) const;

  /// Multilinear interpolation of the sampled values at an arbitrary point
  /// inside the box. Exact at lattice sites.
  double interpolate(const Vec& x) const;

 private:
  WeightedMeasure measure_;
  std::vector<Vec> sites_;
  Vec values_, weights_;
  Vec lo_, hi_;
  int cells_ = 0;
  double cell_vol_ = 0.0;
};

// ---------------------------------------------------------------------------
// Averages, oscillation, BMO
// ---------------------------------------------------------------------------

/// Minimum site count for a region to be considered resolved.
constexpr int kMinRegionSites = 8;

/// Weighted mean over in-region samples. Throws InsufficientResolution when
/// the region holds fewer than kMinRegionSites sites.
double ball_average(const GridFunction& f, const Region& region);

/// omega-mean of |f - f_region| over the region.
double oscillation(const GridFunction& f, const Region& region);

enum class BmoMode { euclidean, orbit };

struct OscRow {
  Ball ball;
  BmoMode mode;
  double average = 0.0;
  double oscillation = 0.0;
  bool resolved = false;
};

struct OscBucket {
  double lo = 0.0, hi = 0.0;  // bucket range (radius or center distance)
  double sup = 0.0;
  int count = 0;
};

struct OscillationReport {
  std::vector<OscRow> rows;
  double sup_oscillation = 0.0;  // over resolved rows
  int skipped = 0;               // unresolved rows
  std::vector<OscBucket> by_radius;
  std::vector<OscBucket> by_distance;
};

/// Oscillation sweep over a ball family; mode orbit averages over O(B).
/// The family sup is a lower estimate of the BMO norm.
OscillationReport bmo_norm(const GridFunction& f, BmoMode mode,
                           const std::vector<Ball>& family);

/// Bucketed oscillation profile (radius buckets for the r -> 0 / r -> inf
/// diagnostics, distance buckets for balls escaping to infinity).
OscillationReport vmo_profile(const GridFunction& f, BmoMode mode,
                              const std::vector<Ball>& family,
                              const std::vector<double>& radius_edges,
                              const std::vector<double>& distance_edges);

// ---------------------------------------------------------------------------
// Medians
// ---------------------------------------------------------------------------

/// Lower weighted median: the smallest sample value m with
/// omega{f > m} <= omega(region)/2 and omega{f < m} <= omega(region)/2.
double median_value(const GridFunction& f, const Region& region);

struct MedianSplit {
  double median = 0.0;
  std::vector<int> e1, e2;  // B-side:      b >= m / b < m
  std::vector<int> f1, f2;  // Btilde-side: b <= m / b >= m
};

/// Splits B against the median of b over Btilde. The F-sets each carry mass
/// >= omega(Btilde)/2 up to one-cell slack (exceeding that is a resolution
/// error). Sign constancy of b(x)-b(y) on E_i x F_i holds by construction.
MedianSplit median_split(const GridFunction& b, const Ball& ball,
                         const Ball& companion);

// ---------------------------------------------------------------------------
// Maximal / sharp functions
// ---------------------------------------------------------------------------

enum class MaximalKind { euclidean, orbit };

struct MaximalResult {
  GridFunction values;          // sup over the radius family, per site
  std::vector<double> skipped_radii;  // unresolved at every center
};

/// M f (euclidean) or M_omega f (orbit): sup over the radius family of
/// region averages of |f| centered at each grid site. Radii that resolve
/// nowhere are recorded and skipped.
MaximalResult maximal_fn(const GridFunction& f, MaximalKind kind,
                         const std::vector<double>& radii);

/// f-sharp: as maximal_fn with oscillation in place of the average of |f|.
MaximalResult sharp_fn(const GridFunction& f, const std::vector<double>& radii);

// ---------------------------------------------------------------------------
// Translation modulus (Frechet-Kolmogorov condition (c) diagnostic)
// ---------------------------------------------------------------------------

struct TranslationModulus {
  double value = 0.0;          // ||f(.+z) - f||_p over the unclipped sites
  double clipped_bound = 0.0;  // (sum over clipped sites of w|f|^p)^{1/p}
  int clipped = 0;             // sites whose shift left the box
};

TranslationModulus translation_modulus(const GridFunction& f, const Vec& z,
                                       double p);

// ---------------------------------------------------------------------------
// Named symbol presets (CLI and test fixtures)
// ---------------------------------------------------------------------------

/// "constant", "sign", "sign-split", "lipschitz-bump", "gauss-bump",
/// "log-abs", "log-abs-m1" (log |x - e_1|).
std::function<double(const Vec&)> preset_function(const std::string& name);

}  // namespace dunkl
