#pragma once

#include "tvk/convexity.hpp"

namespace tvk {

/// Van Kampen-Flores witness: three disjoint (2k+1)-point subsets of a
/// configuration in R^{3k} whose hulls share a point.
struct VkfWitness {
  std::array<IndexSet, 3> parts;
  IntersectionCertificate cert;
  int k = 0;
};

/// Scans unordered triples of disjoint (2k+1)-subsets in canonical order (parts
/// as sorted tuples, triples ordered lexicographically) and returns the first
/// certified one. `fast_any_order` trades the canonical-first guarantee for an
/// early-exit parallel scan that may return any valid witness. When `accept`
/// is set, witnesses failing it are skipped and the scan continues (used by the
/// reduction pipeline to enforce Lemma 1's hypothesis on the seed).
VkfWitness find_vkf3(const PointConfig& config, int k, int jobs = 1, bool fast_any_order = false,
                     const std::function<bool(const VkfWitness&)>& accept = {});

/// Re-checks all VkfWitness invariants exactly.
bool verify_vkf(const PointConfig& config, const VkfWitness& w);

} // namespace tvk
