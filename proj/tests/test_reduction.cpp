#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "tvk/io.hpp"
#include "tvk/reduction.hpp"

using namespace tvk;

namespace {

// exact comparisons against sqrt(2): r >= sqrt(2) iff r >= 0 and r^2 >= 2
bool geq_sqrt2(const Rat& r) { return r.sgn() >= 0 && r * r >= Rat(2); }
bool gt_sqrt2(const Rat& r) { return r.sgn() > 0 && r * r > Rat(2); }

LiftedInstance instance_for(const PointConfig& base, int k) {
  Rat eps = compute_epsilon(base);
  Rat delta = compute_delta_bound(base, eps);
  return make_lifted_instance(base, k, eps, delta, compute_mast_heights(base, delta));
}

PointConfig gp7(uint64_t seed) { return generate_instance(seed, 7, 2, 32); }

} // namespace

TEST_CASE("orthogonal projection") {
  CHECK(orthogonal_project({Rat(3), Rat(-2), Rat(5)}) == RatVector{Rat(3), Rat(-2), Rat(0)});
  RatVector in_plane{Rat(7), Rat(9), Rat(0)};
  CHECK(orthogonal_project(in_plane) == in_plane);
  CHECK(orthogonal_project({Rat(4), Rat(4), Rat(1024)}) == RatVector{Rat(4), Rat(4), Rat(0)});
}

TEST_CASE("central projection") {
  CHECK(central_project({Rat(0), Rat(0), Rat(2)}, {Rat(1), Rat(1), Rat(1)}) ==
        RatVector{Rat(2), Rat(2), Rat(0)});
  RatVector base_point{Rat(5), Rat(-3), Rat(0)};
  CHECK(central_project({Rat(0), Rat(0), Rat(2)}, base_point) == base_point);
  // a lower mast point projects to (A1, 0)
  CHECK(central_project({Rat(4), Rat(4), Rat(8)}, {Rat(4), Rat(4), Rat(2)}) ==
        RatVector{Rat(4), Rat(4), Rat(0)});
  CHECK_THROWS_AS(central_project({Rat(0), Rat(0), Rat(2)}, {Rat(1), Rat(1), Rat(2)}), Error);
}

TEST_CASE("epsilon: two points at distance 8") {
  PointConfig base(2, {{Rat(0), Rat(0)}, {Rat(8), Rat(0)}});
  CHECK(compute_epsilon(base) == Rat(1, 2));
}

TEST_CASE("epsilon: unit square (oracle-enumerated family)") {
  PointConfig base(2, {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}});
  // binding term: corner (0,0) against the hull of {(1,0),(0,1)}, L-inf 1/2
  CHECK(linf_point_hull_distance(base, base[0], {1, 2}) == Rat(1, 2));
  CHECK(compute_epsilon(base) == Rat(1, 32));
}

TEST_CASE("epsilon: 10*eps clears every sampled distance from the family") {
  PointConfig base = gp7(42);
  Rat eps = compute_epsilon(base);
  CHECK(eps.sgn() > 0);
  Rat bound = Rat(10) * eps;
  // (a)-family spot checks: Euclidean distance dominates L-inf, so any positive
  // L-inf family value must exceed 10*eps
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      if (i == j) continue;
      Rat d = linf_point_hull_distance(base, base[i], {j});
      if (d.sgn() > 0) CHECK(d > bound);
    }
  }
  IndexSet s{1, 2, 3};
  Rat d = linf_point_hull_distance(base, base[0], s);
  if (d.sgn() > 0) CHECK(d > bound);
}

TEST_CASE("degenerate configuration is rejected") {
  PointConfig dup(2, {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}});
  CHECK_THROWS_AS(compute_epsilon(dup), Error);
}

TEST_CASE("delta: right-angle base, contract-faithful target sin(pi/8)") {
  // qualifying pairs of this base are the three shared-vertex segment pairs with
  // angles 90, 45, 45 degrees; alpha = pi/4, target sin(pi/8)
  PointConfig base(2, {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
  auto pairs = delta_qualifying_pairs(base);
  CHECK(pairs.size() == 3);
  Rat delta = compute_delta_bound(base, Rat(1));
  // delta^2 <= sin^2(pi/8) = (2 - sqrt2)/4  <=>  sqrt2 <= 2 - 4 delta^2
  CHECK(geq_sqrt2(Rat(2) - Rat(4) * delta * delta));
  // delta > (1-2^-10) sin(pi/8)  <=>  sqrt2 > 2 - 4 delta^2 (1024/1023)^2
  Rat x = Rat(4) * delta * delta * Rat(1024, 1023) * Rat(1024, 1023);
  CHECK(!geq_sqrt2(Rat(2) - x));
  CHECK(gt_sqrt2(Rat(2))); // sanity of the helper
}

TEST_CASE("delta: rational 60-degree base") {
  // all three qualifying pair angles are exactly 60 degrees: cos^2 = 1/4
  PointConfig base(3, {{Rat(0), Rat(0), Rat(0)}, {Rat(1), Rat(1), Rat(0)}, {Rat(1), Rat(0), Rat(1)}});
  auto pairs = delta_qualifying_pairs(base);
  REQUIRE(pairs.size() == 3);
  for (const auto& p : pairs) {
    CHECK(p.cos2_lo <= Rat(1, 4));
    CHECK(p.cos2_hi >= Rat(1, 4));
    CHECK(p.cos2_hi - p.cos2_lo <= Rat(1, 1000000));
  }
  Rat delta = compute_delta_bound(base, Rat(1));
  CHECK(delta <= Rat(1, 2));
  CHECK(delta > Rat(1023, 2048)); // (1 - 2^-10)/2
}

TEST_CASE("delta: no qualifying pair returns eps/2") {
  PointConfig base(2, {{Rat(0), Rat(0)}, {Rat(8), Rat(0)}});
  CHECK(compute_delta_bound(base, Rat(1, 4)) == Rat(1, 8));
}

TEST_CASE("delta satisfies Lemma 4's property on sampled points") {
  PointConfig base = gp7(77);
  Rat eps = compute_epsilon(base);
  Rat delta = compute_delta_bound(base, eps);
  CHECK(delta.sgn() > 0);
  CHECK(delta < eps);
  auto pairs = delta_qualifying_pairs(base);
  if (pairs.empty()) return;
  const auto& pr = pairs.front();
  SplitMix64 rng(4242);
  int accepted = 0;
  for (int trial = 0; trial < 400 && accepted < 25; ++trial) {
    // sample around the meet point within delta (L2-certified by construction)
    RatVector e = pr.meet_point;
    for (auto& c : e) c += delta * Rat(rng.int_in(-64, 64), 128);
    auto [d1, y1] = linf_point_hull_nearest(base, e, pr.p1);
    auto [d2, y2] = linf_point_hull_nearest(base, e, pr.p2);
    if (d1 > delta || d2 > delta) continue;
    if (euclid_sq(e, y1) > delta * delta || euclid_sq(e, y2) > delta * delta) continue;
    ++accepted;
    CHECK(euclid_sq(e, pr.meet_point) <= eps * eps);
  }
  CHECK(accepted > 0);
}

TEST_CASE("mast heights: frozen worked example") {
  // R-inf = 10 from A1, delta = 1/2, dim 2: growth 1 + 10*(3/2)/(1/2) = 31
  PointConfig base(2, {{Rat(0), Rat(0)}, {Rat(10), Rat(0)}, {Rat(0), Rat(10)}, {Rat(3), Rat(4)},
                       {Rat(7), Rat(1)}, {Rat(1), Rat(7)}, {Rat(2), Rat(2)}});
  auto m = compute_mast_heights(base, Rat(1, 2));
  CHECK(m[0] == Rat(1));
  CHECK(m[1] == Rat(32));
  CHECK(m[2] == Rat(1024));
  CHECK(m[3] == Rat(32768));
}

TEST_CASE("mast heights grow by at most doubling once delta dominates") {
  PointConfig base(2, {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
  auto m = compute_mast_heights(base, Rat(1000)); // huge delta: growth factor ~1
  CHECK(m[0] == Rat(1));
  CHECK(m[1] <= Rat(2) * m[0] + Rat(2));
  for (int j = 1; j < 4; ++j) CHECK(m[static_cast<size_t>(j)] > m[static_cast<size_t>(j - 1)]);
}

TEST_CASE("mast heights are strictly increasing for seeded bases") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    PointConfig base = gp7(seed);
    Rat eps = compute_epsilon(base);
    Rat delta = compute_delta_bound(base, eps);
    auto m = compute_mast_heights(base, delta);
    for (int j = 1; j < 4; ++j) CHECK(m[static_cast<size_t>(j)] > m[static_cast<size_t>(j - 1)]);
  }
}

TEST_CASE("lifted instance invariants") {
  PointConfig base = gp7(3);
  // reorder so the lexicographically smallest point (a hull vertex) leads
  int lexmin = 0;
  for (int i = 1; i < 7; ++i)
    if (std::lexicographical_compare(base[i].begin(), base[i].end(), base[lexmin].begin(), base[lexmin].end(),
                                     [](const Rat& a, const Rat& b) { return a < b; }))
      lexmin = i;
  IndexSet order{lexmin};
  for (int i = 0; i < 7; ++i)
    if (i != lexmin) order.push_back(i);
  PointConfig working = base.subset(order);

  LiftedInstance inst = instance_for(working, 1);
  CHECK(inst.lifted.size() == 11);
  CHECK(inst.lifted.dim == 3);
  for (int i = 0; i < 7; ++i) {
    CHECK(inst.lifted[i].back().is_zero());
    CHECK(RatVector(inst.lifted[i].begin(), inst.lifted[i].end() - 1) == working[i]);
  }
  for (int j = 0; j < 4; ++j) {
    CHECK(RatVector(inst.lifted[inst.mast_index(j)].begin(), inst.lifted[inst.mast_index(j)].end() - 1) ==
          working[0]);
    CHECK(inst.lifted[inst.mast_index(j)].back() == inst.mast_heights[static_cast<size_t>(j)]);
  }
  CHECK(inst.delta < inst.epsilon);
  CHECK(inst.delta.sgn() > 0);
}

TEST_CASE("descent rejects a seed whose intersection contains M2") {
  PointConfig base = gp7(3);
  int lexmin = 0;
  for (int i = 1; i < 7; ++i)
    if (std::lexicographical_compare(base[i].begin(), base[i].end(), base[lexmin].begin(), base[lexmin].end(),
                                     [](const Rat& a, const Rat& b) { return a < b; }))
      lexmin = i;
  IndexSet order{lexmin};
  for (int i = 0; i < 7; ++i)
    if (i != lexmin) order.push_back(i);
  LiftedInstance inst = instance_for(base.subset(order), 1);

  // {M2}, {M1,M3}, {A1,M4}: all three hulls contain M2 on the mast line
  CandidateTriple seed{{IndexSet{inst.mast_index(1)}, IndexSet{inst.mast_index(0), inst.mast_index(2)},
                        IndexSet{0, inst.mast_index(3)}}};
  CHECK_THROWS_AS(lemma1_descent(inst, seed), Error);
  try {
    lemma1_descent(inst, seed);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("descent with a base-plane seed restricts to the base plane") {
  PointConfig base = gp7(8);
  int lexmin = 0;
  for (int i = 1; i < 7; ++i)
    if (std::lexicographical_compare(base[i].begin(), base[i].end(), base[lexmin].begin(), base[lexmin].end(),
                                     [](const Rat& a, const Rat& b) { return a < b; }))
      lexmin = i;
  IndexSet order{lexmin};
  for (int i = 0; i < 7; ++i)
    if (i != lexmin) order.push_back(i);
  PointConfig working = base.subset(order);
  LiftedInstance inst = instance_for(working, 1);

  TverbergWitness tw = find_tverberg3(working);
  CandidateTriple seed{tw.parts}; // lifted indices coincide with base indices
  DescentResult d = lemma1_descent(inst, seed, 2);
  CHECK(d.z_prime.back().is_zero());
  for (const auto& part : d.parts)
    for (int i : part) CHECK(i < inst.base_count());
  CHECK(verify_descent_result(inst, seed, d));

  // case 1 with parts unchanged
  CaseSplitResult cs = case_split(inst, d);
  CHECK(cs.case_tag == 1);
  CHECK(!cs.retry);
  CHECK(cs.base_parts == d.parts);
  REQUIRE(cs.cert.has_value());
  CHECK(verify_certificate(inst.base, CandidateTriple{cs.base_parts}, *cs.cert));
}

TEST_CASE("descent conclusions hold on seeded end-to-end instances") {
  for (uint64_t seed = 11; seed < 14; ++seed) {
    PointConfig base = gp7(seed);
    ReductionOptions opts;
    opts.jobs = 2;
    ReductionTrace t = run_reduction(base, 1, opts);
    CHECK(verify_descent_result(t.instance, t.seed, t.descent));
    CHECK(t.descent.unused_special.size() >= 2);
    CHECK(t.descent.z_prime.back() < t.instance.mast_heights[1]); // strictly below M2
  }
}

TEST_CASE("run_reduction end to end with oracle containment") {
  for (uint64_t seed = 21; seed < 24; ++seed) {
    PointConfig base = gp7(seed);
    ReductionOptions opts;
    opts.jobs = 2;
    ReductionTrace t = run_reduction(base, 1, opts);
    CHECK(verify_witness(base, t.final_witness));
    CHECK(t.retries <= opts.retries);
    auto all = brute_force_all(base, 2);
    std::set<IndexSet> found(t.final_witness.parts.begin(), t.final_witness.parts.end());
    bool contained = false;
    for (const auto& [tr, cert] : all) {
      std::set<IndexSet> parts(tr.parts.begin(), tr.parts.end());
      if (parts == found) contained = true;
    }
    CHECK(contained);
  }
}

TEST_CASE("run_reduction rejects invalid bases") {
  PointConfig collinear(2, {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(2), Rat(0)}, {Rat(3), Rat(1)},
                            {Rat(4), Rat(3)}, {Rat(5), Rat(7)}, {Rat(6), Rat(13)}});
  CHECK_THROWS_AS(run_reduction(collinear, 1), Error);

  PointConfig wrong_count = generate_instance(5, 8, 2, 16);
  CHECK_THROWS_AS(run_reduction(wrong_count, 1), Error);

  // the square-and-axis example configuration violates general position
  PointConfig sa(2, {{Rat(1), Rat(1)}, {Rat(-1), Rat(-1)}, {Rat(-1), Rat(1)}, {Rat(1), Rat(-1)},
                     {Rat(0), Rat(0)}, {Rat(2), Rat(0)}, {Rat(-2), Rat(0)}});
  CHECK_THROWS_AS(run_reduction(sa, 1), Error);
}

TEST_CASE("run_reduction is deterministic") {
  PointConfig base = gp7(33);
  ReductionOptions opts;
  opts.jobs = 2;
  ReductionTrace a = run_reduction(base, 1, opts);
  ReductionTrace b = run_reduction(base, 1, opts);
  CHECK(serialize_trace(a) == serialize_trace(b));
  ReductionOptions serial = opts;
  serial.jobs = 1;
  ReductionTrace c = run_reduction(base, 1, serial);
  CHECK(serialize_trace(a) == serialize_trace(c)); // schedule independence
}

TEST_CASE("sabotaged mast heights never produce a false certificate") {
  for (uint64_t seed = 41; seed < 44; ++seed) {
    PointConfig base = gp7(seed);
    ReductionOptions opts;
    opts.jobs = 2;
    opts.height_override = std::array<Rat, 4>{Rat(1), Rat(2), Rat(3), Rat(4)};
    try {
      ReductionTrace t = run_reduction(base, 1, opts);
      CHECK(verify_witness(base, t.final_witness));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::reduction_failed);
    }
  }
}
