#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "tvk/convexity.hpp"
#include "tvk/tverberg.hpp"
#include "tvk/vkf.hpp"

namespace tvk {

/// The lifted configuration: base points embedded at last coordinate 0 plus the
/// four mast points (A1, m_j) on the vertical line above the hull vertex A1
/// (base index 0).
struct LiftedInstance {
  int k = 0;
  PointConfig base;   // R^{3k-1}, A1 re-indexed to position 0
  PointConfig lifted; // R^{3k}: base at height 0, then masts at indices 6k+1..6k+4
  std::array<Rat, 4> mast_heights; // 0 < m1 < m2 < m3 < m4
  Rat epsilon;
  Rat delta; // 0 < delta < epsilon

  int base_count() const { return base.size(); }
  int mast_index(int j) const { return base.size() + j; } // j = 0..3
  bool is_mast(int lifted_index) const { return lifted_index >= base.size(); }
};

/// Replaces the last coordinate by zero.
RatVector orthogonal_project(const RatVector& p);

/// The point where line K-p meets the base hyperplane {last coordinate = 0};
/// exact rational formula K + (p-K) * hK/(hK - hp).
RatVector central_project(const RatVector& K, const RatVector& p);

/// The paper's epsilon: 1/16 of the smallest positive value among (a) the L-inf
/// distance from each point to the hull of every nonempty subset of the others
/// and (b) the L-inf distance from <P1> to <P2> n <P3> over all pairwise
/// disjoint subset triples with intersecting <P2>, <P3>. Zero-distance terms are
/// skipped; a configuration with no positive term is rejected.
Rat compute_epsilon(const PointConfig& base);

/// A qualifying pair for the delta bound: convex hulls meeting in exactly one
/// point, neither subset a single point, direction spaces meeting only at the
/// origin (positive angle; see compute_delta_bound).
struct DeltaQualifyingPair {
  IndexSet p1, p2;
  RatVector meet_point;
  Rat cos2_lo, cos2_hi; // certified enclosure of cos^2 of the pair's angle
};

/// Enumerates qualifying pairs. max_part_size = 0 means unrestricted; a positive
/// value limits both subsets' sizes (used by the k >= 2 pipeline where the full
/// family is astronomically large and Lemma 4 is only applied to small parts).
std::vector<DeltaQualifyingPair> delta_qualifying_pairs(const PointConfig& base, int max_part_size = 0);

/// A rational delta in (0, epsilon) with delta <= epsilon*sin(alpha/2), alpha the
/// minimum qualifying-pair angle, certified within factor (1 - 2^-10) of the
/// exact value. cos^2(alpha) is the largest root of the rational characteristic
/// polynomial of the direction-space cross-Gram operator, enclosed by Sturm-chain
/// bisection. With no qualifying pair, returns epsilon/2 (Lemma 4 is vacuous).
Rat compute_delta_bound(const PointConfig& base, const Rat& epsilon, int max_part_size = 0);

/// m1 = 1; m_j = next power of two >= m_{j-1}*(1 + R*s/delta) + 1 where R is the
/// max L-inf distance from A1 (index 0) to the base points and s a rational
/// upper bound on sqrt(dim). Guarantees the central-projection displacement
/// bound |pi_{M_j} X - pi X|_2 < delta over the hull of all earlier points.
std::array<Rat, 4> compute_mast_heights(const PointConfig& base, const Rat& delta);

LiftedInstance make_lifted_instance(const PointConfig& base, int k, const Rat& epsilon, const Rat& delta,
                                    const std::array<Rat, 4>& mast_heights);

/// Lemma 1's output: reduced parts (lifted indices), the descent minimizer Z',
/// its certificate, and the >= 2 special points absent from the parts.
struct DescentResult {
  std::array<IndexSet, 3> parts;
  RatVector z_prime;
  IntersectionCertificate cert;
  std::vector<std::string> unused_special; // labels among A1, M1..M4
};

/// Lemma 1 as a certified search: minimizes the last coordinate over all triple
/// intersections of pairwise disjoint, affinely independent subsets whose
/// special-line usage is within the seed's, then reduces the canonical-first
/// minimizer (Caratheodory + carrier face) until all three conclusions hold.
/// Precondition (checked by LP): M2 is not in the seed triple's intersection.
DescentResult lemma1_descent(const LiftedInstance& inst, const CandidateTriple& seed, int jobs = 1);

bool verify_descent_result(const LiftedInstance& inst, const CandidateTriple& seed, const DescentResult& d);

struct CaseSplitResult {
  int case_tag = 0; // 1 or 2
  std::array<IndexSet, 3> base_parts;
  std::optional<IntersectionCertificate> cert; // absent => retry (insufficient mast heights)
  std::optional<std::array<int, 3>> highest_vertices;
  bool retry = false;
};

/// Case 1: some part lies in the base plane; restrict and certify. Case 2: one
/// mast per part and A1 absent (forced by conclusion 2, asserted); orthogonal
/// projection for the lowest-mast part, central projections for the others, then
/// certify the projected base triple or signal a retry.
CaseSplitResult case_split(const LiftedInstance& inst, const DescentResult& d);

struct ReductionOptions {
  int retries = 8;
  int jobs = 1;
  bool fast_vkf = false;
  std::optional<std::array<Rat, 4>> height_override; // sabotage/testing hook
  uint64_t perturb_seed = 0xA11CE5ull;
};

/// Full audit trail of one reduction run. Lifted-side index sets refer to the
/// working (reordered, possibly perturbed) instance recorded here;
/// projected_parts and final are in the ORIGINAL input indexing.
struct ReductionTrace {
  LiftedInstance instance;
  std::vector<int> base_order; // working index -> original index
  bool a1_perturbed = false;
  VkfWitness vkf;
  CandidateTriple seed; // descent seed: vkf.parts unless the fallback search fired
  DescentResult descent;
  int case_tag = 0;
  std::optional<std::array<int, 3>> highest_vertices;
  std::array<IndexSet, 3> projected_parts;
  int retries = 0;
  TverbergWitness final_witness;
};

/// The paper's construction end to end: reorder (lexicographically smallest
/// point, always a hull vertex, to index 0), compute epsilon/delta/masts, lift,
/// find a VKF witness, run the descent, split into cases, project, and certify
/// the final partition against the original input. Retry signals double all
/// mast heights; after 3 failed attempts A1 is also perturbed by a deterministic
/// rational offset of L-inf norm < epsilon/4 (general position revalidated).
ReductionTrace run_reduction(const PointConfig& base, int k, const ReductionOptions& opts = {});

} // namespace tvk
