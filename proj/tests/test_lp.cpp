#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tvk/lp.hpp"
#include "tvk/prng.hpp"

using namespace tvk;

namespace {

LinearProgram single_var() {
  LinearProgram lp;
  lp.num_vars = 1;
  lp.nonneg = {0};
  lp.objective = {Rat(1)};
  return lp;
}

} // namespace

TEST_CASE("minimize x subject to x >= 1/3") {
  LinearProgram lp = single_var();
  lp.a_le = {{Rat(-1)}};
  lp.b_le = {Rat(-1, 3)};
  auto out = solve(lp);
  REQUIRE(out.status == LPStatus::optimal);
  CHECK(*out.value == Rat(1, 3));
  CHECK(verify_outcome(lp, out));
}

TEST_CASE("x >= 1 and x <= 0 is infeasible with a verifying Farkas certificate") {
  LinearProgram lp = single_var();
  lp.a_le = {{Rat(-1)}, {Rat(1)}};
  lp.b_le = {Rat(-1), Rat(0)};
  auto out = solve(lp);
  REQUIRE(out.status == LPStatus::infeasible);
  REQUIRE(out.farkas.has_value());
  CHECK(verify_outcome(lp, out)); // certificate fed back through the checker
}

TEST_CASE("minimize x subject to x <= 0 only is unbounded") {
  LinearProgram lp = single_var();
  lp.a_le = {{Rat(1)}};
  lp.b_le = {Rat(0)};
  auto out = solve(lp);
  CHECK(out.status == LPStatus::unbounded);
  CHECK(verify_outcome(lp, out));
}

TEST_CASE("equality constraints are handled natively") {
  // min x + y s.t. x + y = 2, x - y <= 0, both free
  LinearProgram lp;
  lp.num_vars = 2;
  lp.nonneg = {0, 0};
  lp.objective = {Rat(1), Rat(1)};
  lp.a_eq = {{Rat(1), Rat(1)}};
  lp.b_eq = {Rat(2)};
  lp.a_le = {{Rat(1), Rat(-1)}};
  lp.b_le = {Rat(0)};
  auto out = solve(lp);
  REQUIRE(out.status == LPStatus::optimal);
  CHECK(*out.value == Rat(2));
  CHECK(verify_outcome(lp, out));
}

TEST_CASE("verify_outcome rejects a perturbed solution") {
  LinearProgram lp = single_var();
  lp.a_le = {{Rat(-1)}};
  lp.b_le = {Rat(-1, 3)};
  auto out = solve(lp);
  REQUIRE(out.status == LPStatus::optimal);
  LPOutcome bad = out;
  (*bad.solution)[0] = Rat(1, 4); // violates x >= 1/3
  CHECK(!verify_outcome(lp, bad));
  LPOutcome wrong_value = out;
  *wrong_value.value += Rat(1);
  CHECK(!verify_outcome(lp, wrong_value));
}

TEST_CASE("verify_outcome rejects a tampered Farkas certificate") {
  LinearProgram lp = single_var();
  lp.a_le = {{Rat(-1)}, {Rat(1)}};
  lp.b_le = {Rat(-1), Rat(0)};
  auto out = solve(lp);
  REQUIRE(out.status == LPStatus::infeasible);
  LPOutcome bad = out;
  (*bad.farkas)[0] = -(*bad.farkas)[0];
  CHECK(!verify_outcome(lp, bad));
}

TEST_CASE("objective scaling by a positive rational scales the optimum") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    LinearProgram lp;
    lp.num_vars = 3;
    lp.nonneg = {1, 1, 1};
    lp.objective = {Rat(rng.int_in(-4, 4)), Rat(rng.int_in(-4, 4)), Rat(rng.int_in(-4, 4))};
    // box 0 <= x <= 3 keeps it bounded; add two random cuts
    for (int j = 0; j < 3; ++j) {
      RatVector row(3);
      row[static_cast<size_t>(j)] = Rat(1);
      lp.a_le.push_back(row);
      lp.b_le.push_back(Rat(3));
    }
    for (int c = 0; c < 2; ++c) {
      lp.a_le.push_back({Rat(rng.int_in(-3, 3)), Rat(rng.int_in(-3, 3)), Rat(rng.int_in(-3, 3))});
      lp.b_le.push_back(Rat(rng.int_in(1, 9)));
    }
    auto out = solve(lp);
    REQUIRE(out.status == LPStatus::optimal);
    Rat factor(static_cast<long long>(1 + rng.below(7)), 2);
    LinearProgram scaled = lp;
    for (auto& c : scaled.objective) c *= factor;
    auto out2 = solve(scaled);
    REQUIRE(out2.status == LPStatus::optimal);
    CHECK(*out2.value == factor * *out.value);
    CHECK(verify_outcome(lp, out));
    CHECK(verify_outcome(scaled, out2));
  }
}

TEST_CASE("feasibility agrees with the basic-solution oracle on bounded instances") {
  SplitMix64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    LinearProgram lp;
    int nv = 2 + static_cast<int>(rng.below(2));
    lp.num_vars = nv;
    lp.nonneg.assign(static_cast<size_t>(nv), 1);
    lp.objective.assign(static_cast<size_t>(nv), Rat());
    for (int j = 0; j < nv; ++j) {
      RatVector row(static_cast<size_t>(nv));
      row[static_cast<size_t>(j)] = Rat(1);
      lp.a_le.push_back(row);
      lp.b_le.push_back(Rat(2));
    }
    int cuts = 1 + static_cast<int>(rng.below(3));
    for (int c = 0; c < cuts; ++c) {
      RatVector row(static_cast<size_t>(nv));
      for (auto& v : row) v = Rat(rng.int_in(-3, 3));
      lp.a_le.push_back(row);
      lp.b_le.push_back(Rat(rng.int_in(-4, 6)));
    }
    if (rng.below(2)) {
      RatVector row(static_cast<size_t>(nv));
      for (auto& v : row) v = Rat(rng.int_in(-2, 2));
      lp.a_eq.push_back(row);
      lp.b_eq.push_back(Rat(rng.int_in(-2, 4)));
    }
    auto out = solve(lp);
    bool solver_feasible = out.status == LPStatus::optimal;
    REQUIRE(out.status != LPStatus::unbounded); // boxed region
    CHECK(solver_feasible == oracle::lp_feasible(lp));
    CHECK(verify_outcome(lp, out));
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("malformed dimensions raise input errors") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.nonneg = {1, 1};
  lp.objective = {Rat(1)}; // wrong size
  CHECK_THROWS_AS(solve(lp), Error);
}
