#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvk/rat.hpp"

namespace tvk {

using RatVector = std::vector<Rat>;
using RatMatrix = std::vector<RatVector>; // rectangular, row-major
using IndexSet = std::vector<int>;        // sorted, distinct point indices

// ---- vector helpers ----

RatVector vec_sub(const RatVector& a, const RatVector& b);
RatVector vec_add(const RatVector& a, const RatVector& b);
RatVector vec_scale(const Rat& s, const RatVector& a);
Rat dot(const RatVector& a, const RatVector& b);
Rat linf_norm(const RatVector& a);
Rat euclid_sq(const RatVector& a, const RatVector& b);

/// Exact rank over the rationals (Gaussian elimination, first-nonzero pivoting).
int rank(RatMatrix m);

/// Labeled finite point set in R^dim. Immutable after construction; indices are
/// 0-based and stable, labels distinct.
struct PointConfig {
  int dim = 0;
  std::vector<RatVector> points;
  std::vector<std::string> labels;

  PointConfig() = default;
  PointConfig(int dim, std::vector<RatVector> pts, std::vector<std::string> labels = {});

  int size() const { return static_cast<int>(points.size()); }
  const RatVector& operator[](int i) const { return points[static_cast<size_t>(i)]; }

  /// New config containing the given points (in the given order).
  PointConfig subset(const IndexSet& idx) const;
};

/// Dimension of the affine hull: -1 for the empty set, 0 for a point, else the
/// rank of the differences against the first point.
int affine_dim(std::span<const RatVector> pts);
int affine_dim(const PointConfig& config, const IndexSet& subset);

struct GeneralPositionReport {
  bool ok = true;
  IndexSet violator; // smallest-cardinality, lexicographically first; empty when ok
};

/// The paper's predicate: no k points in a (k-2)-dimensional affine subspace for
/// any k <= dim+1, i.e. every subset of size <= dim+1 is affinely independent.
/// Exhaustive by increasing subset size with early exit.
GeneralPositionReport is_general_position(const PointConfig& config);

// ---- canonical index-set utilities ----

/// Lexicographic tuple order on sorted index sets ((0) < (0,1) < (1)).
bool tuple_less(const IndexSet& a, const IndexSet& b);

/// Visits all nonempty subsets of `universe` (a sorted index list) in tuple-lex
/// order; stops early when fn returns false.
void for_each_subset_lex(const IndexSet& universe, const std::function<bool(const IndexSet&)>& fn);

} // namespace tvk
