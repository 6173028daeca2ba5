#pragma once

#include <cstdint>
#include <optional>

#include "tvk/core.hpp"

namespace tvk {

/// min objective.x  s.t.  a_eq x = b_eq,  a_le x <= b_le,  x_i >= 0 where nonneg[i].
struct LinearProgram {
  RatVector objective;
  RatMatrix a_eq;
  RatVector b_eq;
  RatMatrix a_le;
  RatVector b_le;
  int num_vars = 0;
  std::vector<uint8_t> nonneg; // per variable

  void validate() const; // throws ErrorKind::input on inconsistent dimensions
};

enum class LPStatus { optimal, infeasible, unbounded };

struct LPOutcome {
  LPStatus status = LPStatus::infeasible;
  std::optional<RatVector> solution; // original variable space
  std::optional<Rat> value;
  /// Farkas multipliers (u | w): u over the equality rows (free sign), w over the
  /// <=-rows (w >= 0). Infeasibility is proved by g = a_eq^T u + a_le^T w having
  /// g_i >= 0 on nonnegative variables, g_i = 0 on free variables, while
  /// u.b_eq + w.b_le < 0. All checks are exact rational substitution.
  std::optional<RatVector> farkas;
};

/// Exact two-phase primal simplex over the rationals with Bland's anti-cycling
/// rule. Deterministic: identical inputs produce identical outcomes.
LPOutcome solve(const LinearProgram& lp);

/// Re-derives the LPOutcome invariants by direct substitution; never trusts the
/// solver. Returns false on any discrepancy.
bool verify_outcome(const LinearProgram& lp, const LPOutcome& out);

} // namespace tvk
