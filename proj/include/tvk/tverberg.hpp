#pragma once

#include "tvk/convexity.hpp"

namespace tvk {

/// A Tverberg 3-partition: the parts cover every index of the configuration and
/// the certificate proves their hulls share a point.
struct TverbergWitness {
  std::array<IndexSet, 3> parts;
  IntersectionCertificate cert;
};

/// Visits every unordered partition of {0..n-1} into 3 nonempty blocks in
/// canonical order: blocks sorted by smallest element, partitions ordered by
/// lexicographic comparison of the block tuples.
std::vector<std::array<IndexSet, 3>> enumerate_partitions3(int n);

/// First partition (canonical order) whose three hulls intersect. For 2*dim+3
/// points in general position success is guaranteed; exhaustion signals an
/// input below the theorem threshold or a bug.
TverbergWitness find_tverberg3(const PointConfig& config, int jobs = 1);

/// Every intersecting 3-partition with its certificate, canonical order.
/// Guarded to |config| <= 12 (Stirling growth).
std::vector<std::pair<CandidateTriple, IntersectionCertificate>> brute_force_all(const PointConfig& config,
                                                                                 int jobs = 1);

/// Absorbs all indices outside t into part 1; the certificate stays valid since
/// that hull only grows.
TverbergWitness complete_partition(const PointConfig& config, const CandidateTriple& t,
                                   const IntersectionCertificate& cert);

/// Re-derives every TverbergWitness invariant by exact substitution.
bool verify_witness(const PointConfig& config, const TverbergWitness& w);

} // namespace tvk
