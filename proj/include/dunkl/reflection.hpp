#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "dunkl/common.hpp"

namespace dunkl {

/// Reflects x in the hyperplane orthogonal to alpha:
///   x - 2 <x,alpha>/|alpha|^2 alpha.
/// Works for un-normalized alpha as well. Throws InvalidArgument on alpha = 0.
Vec reflect(const Vec& alpha, const Vec& x);

/// A finite root system with a G-invariant multiplicity function.
///
/// Construction normalizes every root to <alpha,alpha> = 2, checks closure of
/// the set under its own reflections, checks that the given positive subsystem
/// splits R disjointly as R+ u (-R+), and checks G-invariance of the
/// multiplicity. Violations are hard errors.
class RootSystemSpec {
 public:
  /// roots: the full system R (both signs). positive: indices into `roots`
  /// selecting R+. multiplicity: one kappa >= 0 per root, matching `roots`.
  RootSystemSpec(int dimension, std::vector<Vec> roots,
                 std::vector<int> positive, std::vector<double> multiplicity);

  /// Empty root system (trivial group) in the given dimension.
  static RootSystemSpec trivial(int dimension);

  /// Z2^N sign-flip system: roots {±sqrt(2) e_i}, kappa[i] per coordinate.
  static RootSystemSpec z2n(const std::vector<double>& kappa);

  /// Dihedral system I2(m), m in {3,4,6}: 2m roots in R^2. For even m the
  /// two conjugacy classes may carry distinct multiplicities
  /// (kappa_even for k ≡ 0, kappa_odd for k ≡ 1 mod 2); odd m forces one.
  static RootSystemSpec dihedral(int m, double kappa_even, double kappa_odd);
  static RootSystemSpec dihedral(int m, double kappa) {
    return dihedral(m, kappa, kappa);
  }

  /// Direct product embedded in the orthogonal sum of the two spaces.
  static RootSystemSpec direct_product(const RootSystemSpec& a,
                                       const RootSystemSpec& b);

  int dimension() const { return dimension_; }
  const std::vector<Vec>& roots() const { return roots_; }
  const std::vector<int>& positive_roots() const { return positive_; }
  double multiplicity(int root_index) const { return kappa_[root_index]; }
  const std::vector<double>& multiplicities() const { return kappa_; }

  /// gamma_kappa = sum of kappa over all roots of R.
  double gamma() const;

  /// True when R is {±sqrt(2) e_i} for a subset of coordinates (the groups
  /// with an explicit rank-one intertwining measure). Fills per-coordinate
  /// kappa (0 for coordinates without a root pair) when requested.
  bool is_z2_product(std::vector<double>* coordinate_kappa = nullptr) const;

 private:
  int dimension_;
  std::vector<Vec> roots_;
  std::vector<int> positive_;
  std::vector<double> kappa_;
};

/// The finite reflection group generated by the root reflections, stored as
/// explicit orthogonal matrices. Immutable after construction.
class ReflectionGroup {
 public:
  const std::vector<Mat>& elements() const { return elements_; }
  const std::vector<int>& generator_indices() const { return generators_; }
  int order() const { return static_cast<int>(elements_.size()); }
  int dimension() const { return dimension_; }

  /// G-orbit of x, duplicates merged at tolerance 1e-10.
  std::vector<Vec> orbit(const Vec& x) const;

  /// Orbit pseudometric d(x,y) = min over sigma of |x - sigma(y)|.
  double orbit_distance(const Vec& x, const Vec& y) const;

  /// Index of the stored element matching m (tolerance 1e-10), or -1.
  int find(const Mat& m) const;

  friend ReflectionGroup generate_group(const RootSystemSpec& spec,
                                        int max_order);

 private:
  int dimension_ = 0;
  std::vector<Mat> elements_;
  std::vector<int> generators_;
  // canonical rounded-entry key -> element index (fast path; find() falls
  // back to a tolerance scan on hash miss)
  std::unordered_map<std::string, int> index_;
  std::string key_of(const Mat& m) const;
};

/// Breadth-first closure over matrix products starting from {I} u {sigma_a}.
/// Throws GroupTooLarge if the closure exceeds max_order elements.
ReflectionGroup generate_group(const RootSystemSpec& spec, int max_order = 1024);

}  // namespace dunkl
