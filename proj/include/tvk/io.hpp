#pragma once

#include <string>

#include "tvk/reduction.hpp"

namespace tvk {

// Documents are UTF-8 JSON. Rationals are always strings ("-3/7", "2"), never
// floating point: exactness is the format's contract.

/// Parses a point-set document {"dim": n, "points": [["1/2","-3"],...],
/// "labels": [...]?}. Labels default to "P0".."Pn-1". Errors carry the
/// offending row/field.
PointConfig parse_pointset(const std::string& text);

/// Canonical serialization; parse(serialize(c)) reproduces c exactly.
std::string serialize_pointset(const PointConfig& config);

/// Witness documents: kind "tverberg" | "vkf" | "reduction-trace".
std::string serialize_tverberg(const TverbergWitness& w);
std::string serialize_vkf(const VkfWitness& w);
std::string serialize_trace(const ReductionTrace& t);
std::string serialize_oracle(const std::vector<std::pair<CandidateTriple, IntersectionCertificate>>& all);

/// Re-checks any witness document against the point set it refers to. For
/// reduction traces this reconstructs the lifted instance and re-verifies the
/// VKF witness, the descent conclusions, and the final partition.
bool verify_document(const PointConfig& points, const std::string& witness_text);

/// Deterministic seeded instance: splitmix64 coordinates with numerators in
/// [-2^16, 2^16] and denominators in [1, denom_bound], rejection-resampled
/// until the configuration is in general position.
PointConfig generate_instance(uint64_t seed, int count, int dim, int denom_bound);

/// Static SVG for dim-2 configurations: labeled points, shaded part hulls and
/// the common point when a witness is given. Rationals become doubles only at
/// this final drawing step; presentation only.
std::string render_svg(const PointConfig& config, const std::optional<TverbergWitness>& witness);

} // namespace tvk
