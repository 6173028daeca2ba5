#pragma once

// Independent oracles for the test and acceptance suites. These deliberately
// avoid the library's LP path: membership enumerates affinely independent
// subsets and solves square barycentric systems; polytope questions enumerate
// basic feasible solutions over all column subsets.

#include "tvk/convexity.hpp"
#include "tvk/lp.hpp"

namespace tvk::oracle {

/// q in <S> by exhaustive affinely-independent-subset search.
bool membership(const PointConfig& config, const RatVector& q, const IndexSet& s);

/// All basic feasible solutions of {x >= 0 : a x = b} (duplicates allowed).
std::vector<RatVector> basic_feasible_solutions(const RatMatrix& a, const RatVector& b);

/// Feasibility of a LinearProgram whose feasible region is a polytope, via
/// basic-solution enumeration of the slack/split standard form.
bool lp_feasible(const LinearProgram& lp);

/// Triple-hull intersection via basic solutions of the joint combination system.
bool triple_intersects(const PointConfig& config, const CandidateTriple& t);

/// Exact minimum of the last coordinate over a nonempty triple intersection.
Rat min_last(const PointConfig& config, const CandidateTriple& t);

} // namespace tvk::oracle
