#pragma once

#include <array>
#include <optional>
#include <utility>

#include "tvk/lp.hpp"

namespace tvk {

/// Exact proof that three convex hulls share a point: the point itself plus one
/// convex-coefficient list per part. Checked by substitution, never trusted.
struct IntersectionCertificate {
  RatVector common_point;
  std::array<std::vector<std::pair<int, Rat>>, 3> coefficients; // (point index, weight)
};

struct CandidateTriple {
  std::array<IndexSet, 3> parts; // sorted, pairwise disjoint, nonempty

  void validate(int config_size) const;
};

/// Convex coefficients expressing q over S (aligned with S), or nothing when
/// q is outside the hull.
std::optional<RatVector> hull_membership(const PointConfig& config, const RatVector& q, const IndexSet& S);

/// One joint LP over the three coefficient vectors; a certificate exists iff the
/// three hulls share a point.
std::optional<IntersectionCertificate> triple_intersection(const PointConfig& config, const CandidateTriple& t);

/// Exact minimum of the last coordinate over the triple intersection, with an
/// attaining certificate; nothing when the hulls do not meet.
std::optional<std::pair<Rat, IntersectionCertificate>> min_last_coordinate(const PointConfig& config,
                                                                           const CandidateTriple& t);

/// Affinely independent S' within S still carrying q. Deterministic: starts from
/// the index-weight-minimal convex representation and zeroes out coefficients via
/// the classical dependent-combination step, ties to the smallest index.
IndexSet caratheodory_reduce(const PointConfig& config, const RatVector& q, const IndexSet& S);

/// Vertices of the (affinely independent) simplex whose barycentric coordinates
/// for q are strictly positive: the minimal face containing q.
IndexSet carrier_face(const PointConfig& config, const RatVector& q, const IndexSet& simplex);

/// Unique barycentric coordinates of q over an affinely independent subset
/// (aligned with `simplex`); nothing when q lies outside the affine hull.
std::optional<RatVector> barycentric_coordinates(const PointConfig& config, const RatVector& q,
                                                 const IndexSet& simplex);

/// True iff point i is outside the hull of all other points.
bool is_vertex(const PointConfig& config, int i);

/// Exact minimum L-infinity distance between <P> and <Q1> n <Q2>. A valid lower
/// bound for the Euclidean distance (L2 >= Linf), which is all the epsilon
/// machinery needs; avoids exact QP entirely.
Rat linf_distance_lower(const PointConfig& config, const IndexSet& P, const IndexSet& Q1, const IndexSet& Q2);

// ---- shared support; also used by the finders and the reduction pipeline ----

bool verify_certificate(const PointConfig& config, const CandidateTriple& t, const IntersectionCertificate& cert);

/// Min L-infinity distance from q to <S>, plus an attaining hull point.
std::pair<Rat, RatVector> linf_point_hull_nearest(const PointConfig& config, const RatVector& q, const IndexSet& S);
Rat linf_point_hull_distance(const PointConfig& config, const RatVector& q, const IndexSet& S);

/// A common point of two hulls when they intersect.
std::optional<RatVector> pair_intersection_point(const PointConfig& config, const IndexSet& S1, const IndexSet& S2);

} // namespace tvk
