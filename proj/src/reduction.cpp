#include "tvk/reduction.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "scan.hpp"
#include "tvk/prng.hpp"

namespace tvk {

RatVector orthogonal_project(const RatVector& p) {
  require(!p.empty(), ErrorKind::input, "orthogonal_project: empty vector");
  RatVector q = p;
  q.back() = Rat();
  return q;
}

RatVector central_project(const RatVector& k, const RatVector& p) {
  require(!k.empty() && k.size() == p.size(), ErrorKind::input, "central_project: dimension mismatch");
  const Rat& hk = k.back();
  require(!hk.is_zero(), ErrorKind::precondition, "central_project: center lies on the base plane");
  const Rat& hp = p.back();
  require(hp != hk, ErrorKind::projection_undefined, "central_project: point at the center's height");
  Rat t = hk / (hk - hp);
  RatVector q(p.size());
  for (size_t i = 0; i < p.size(); ++i) q[i] = k[i] + (p[i] - k[i]) * t;
  require(q.back().is_zero(), ErrorKind::internal, "central_project: image off the base plane");
  return q;
}

Rat compute_epsilon(const PointConfig& base) {
  int n = base.size();
  require(n >= 1, ErrorKind::precondition, "compute_epsilon: empty base");
  require(n <= 30, ErrorKind::input, "compute_epsilon: bitmask enumeration limited to 30 points");

  bool have = false;
  Rat best;
  auto consider = [&](const Rat& v) {
    if (v.sgn() > 0 && (!have || v < best)) {
      best = v;
      have = true;
    }
  };

  // (a) every point against the hull of every nonempty subset of the others
  for (int i = 0; i < n; ++i) {
    IndexSet others;
    for (int j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    uint32_t limit = 1u << others.size();
    for (uint32_t mask = 1; mask < limit; ++mask) {
      IndexSet s;
      for (size_t b = 0; b < others.size(); ++b)
        if (mask & (1u << b)) s.push_back(others[b]);
      consider(linf_point_hull_distance(base, base[i], s));
    }
  }

  // (b) <P1> against <Q1> n <Q2> over pairwise disjoint triples
  std::vector<detail::Box> boxes(1u << n);
  std::vector<IndexSet> sets(1u << n);
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sets[mask].push_back(i);
    boxes[mask] = detail::make_box(base, sets[mask]);
  }
  uint32_t full = (1u << n) - 1;
  for (uint32_t m1 = 1; m1 <= full; ++m1) {
    uint32_t rest = full & ~m1;
    for (uint32_t m2 = rest; m2; m2 = (m2 - 1) & rest) {
      if (m2 < m1) break; // submask iteration is descending; unordered pairs once
      if (!detail::boxes_meet(boxes[m1], boxes[m2])) continue;
      if (!pair_intersection_point(base, sets[m1], sets[m2])) continue;
      uint32_t outside = full & ~(m1 | m2);
      for (uint32_t mp = outside; mp; mp = (mp - 1) & outside)
        consider(linf_distance_lower(base, sets[mp], sets[m1], sets[m2]));
    }
  }

  require(have, ErrorKind::degenerate_input, "compute_epsilon: no positive distance in the considered family");
  return best / Rat(16);
}

std::array<Rat, 4> compute_mast_heights(const PointConfig& base, const Rat& delta) {
  require(delta.sgn() > 0, ErrorKind::precondition, "compute_mast_heights: delta must be positive");
  Rat r_inf;
  for (int i = 1; i < base.size(); ++i) {
    Rat d = linf_norm(vec_sub(base[i], base[0]));
    if (d > r_inf) r_inf = d;
  }
  long long q = 1;
  while (Rat(q) * Rat(q) < Rat(16LL * base.dim)) ++q; // q = ceil(4 sqrt(dim))
  Rat slack(q, 4);
  Rat growth = Rat(1) + r_inf * slack / delta;
  std::array<Rat, 4> m;
  m[0] = Rat(1);
  for (int j = 1; j < 4; ++j) {
    Rat bound = m[static_cast<size_t>(j - 1)] * growth + Rat(1);
    Rat p(1);
    while (p < bound) p *= Rat(2);
    m[static_cast<size_t>(j)] = p;
  }
  return m;
}

LiftedInstance make_lifted_instance(const PointConfig& base, int k, const Rat& epsilon, const Rat& delta,
                                    const std::array<Rat, 4>& mast_heights) {
  require(k >= 1, ErrorKind::input, "make_lifted_instance: k must be positive");
  require(base.dim == 3 * k - 1, ErrorKind::precondition, "make_lifted_instance: base dimension must be 3k-1");
  require(base.size() == 6 * k + 1, ErrorKind::precondition, "make_lifted_instance: base must have 6k+1 points");
  require(epsilon.sgn() > 0 && delta.sgn() > 0 && delta < epsilon, ErrorKind::input,
          "make_lifted_instance: need 0 < delta < epsilon");
  Rat prev;
  for (const Rat& h : mast_heights) {
    require(h > prev, ErrorKind::input, "make_lifted_instance: mast heights must be increasing and positive");
    prev = h;
  }
  require(is_general_position(base).ok, ErrorKind::precondition, "make_lifted_instance: base not in general position");
  require(is_vertex(base, 0), ErrorKind::precondition, "make_lifted_instance: base point 0 is not a hull vertex");

  std::vector<RatVector> pts;
  std::vector<std::string> labels;
  std::set<std::string> seen(base.labels.begin(), base.labels.end());
  pts.reserve(static_cast<size_t>(base.size()) + 4);
  for (int i = 0; i < base.size(); ++i) {
    RatVector p = base[i];
    p.push_back(Rat());
    pts.push_back(std::move(p));
    labels.push_back(base.labels[static_cast<size_t>(i)]);
  }
  for (int j = 0; j < 4; ++j) {
    RatVector p = base[0];
    p.push_back(mast_heights[static_cast<size_t>(j)]);
    pts.push_back(std::move(p));
    std::string name = "M" + std::to_string(j + 1);
    while (seen.count(name)) name += "'";
    seen.insert(name);
    labels.push_back(name);
  }
  return LiftedInstance{k, base, PointConfig(3 * k, std::move(pts), std::move(labels)), mast_heights, epsilon,
                        delta};
}

namespace {

const char* kSpecialLabels[5] = {"A1", "M1", "M2", "M3", "M4"};

uint64_t special_mask(const LiftedInstance& inst) {
  uint64_t m = 1; // A1 at lifted index 0
  for (int j = 0; j < 4; ++j) m |= 1ull << inst.mast_index(j);
  return m;
}

struct DescentSubset {
  IndexSet idx;
  uint64_t mask;
  detail::Box box;
  Rat min_height;
};

// All nonempty affinely independent subsets of the lifted points whose special
// points are within `allowed`, tuple-lex order. Dependent prefixes are pruned
// (every superset of a dependent set is dependent).
std::vector<DescentSubset> enumerate_descent_subsets(const LiftedInstance& inst, uint64_t allowed) {
  const PointConfig& lifted = inst.lifted;
  int n = lifted.size();
  int max_size = 3 * inst.k + 1;
  uint64_t specials = special_mask(inst);
  std::vector<DescentSubset> out;
  IndexSet cur;
  std::function<void(int)> rec = [&](int start) {
    for (int e = start; e < n; ++e) {
      uint64_t bit = 1ull << e;
      if ((specials & bit) && !(allowed & bit)) continue;
      cur.push_back(e);
      if (affine_dim(lifted, cur) == static_cast<int>(cur.size()) - 1) {
        Rat mh = lifted[cur[0]].back();
        for (int i : cur)
          if (lifted[i].back() < mh) mh = lifted[i].back();
        out.push_back({cur, detail::index_mask(cur), detail::make_box(lifted, cur), mh});
        if (static_cast<int>(cur.size()) < max_size) rec(e + 1);
      }
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

uint64_t parts_special_mask(const LiftedInstance& inst, const std::array<IndexSet, 3>& parts) {
  uint64_t specials = special_mask(inst);
  uint64_t used = 0;
  for (const auto& part : parts)
    for (int i : part) used |= 1ull << i;
  return used & specials;
}

std::vector<std::string> unused_special_labels(const LiftedInstance& inst, uint64_t used_specials) {
  std::vector<std::string> out;
  if (!(used_specials & 1ull)) out.push_back(kSpecialLabels[0]);
  for (int j = 0; j < 4; ++j)
    if (!(used_specials & (1ull << inst.mast_index(j)))) out.push_back(kSpecialLabels[j + 1]);
  return out;
}

bool m2_in_seed_intersection(const LiftedInstance& inst, const CandidateTriple& seed) {
  const RatVector& m2 = inst.lifted[inst.mast_index(1)];
  for (const auto& part : seed.parts)
    if (!hull_membership(inst.lifted, m2, part)) return false;
  return true;
}

// Canonical-first intersecting triple whose union misses at least one special
// point. Missing any special forces M2 out of the intersection: a point of the
// line A1 x R inside all three disjoint hulls needs M2's own part plus two parts
// each holding line points on both sides of M2, i.e. all five specials.
std::optional<CandidateTriple> find_special_missing_seed(const LiftedInstance& inst, int jobs) {
  uint64_t specials = special_mask(inst);
  std::array<int, 5> special_ids{0, inst.mast_index(0), inst.mast_index(1), inst.mast_index(2),
                                 inst.mast_index(3)};
  for (int excluded : special_ids) {
    uint64_t allowed = specials & ~(1ull << excluded);
    auto subs = enumerate_descent_subsets(inst, allowed);
    const long long count = static_cast<long long>(subs.size());
    detail::PairFeasibility pair_memo(inst.lifted);
    auto group_fn = [&](long long a) -> std::optional<CandidateTriple> {
      const DescentSubset& sa = subs[static_cast<size_t>(a)];
      for (long long b = a + 1; b < count; ++b) {
        const DescentSubset& sb = subs[static_cast<size_t>(b)];
        if (sa.mask & sb.mask) continue;
        if (!detail::boxes_meet(sa.box, sb.box)) continue;
        bool ab_checked = false, ab_ok = false;
        for (long long c = b + 1; c < count; ++c) {
          const DescentSubset& sc = subs[static_cast<size_t>(c)];
          if ((sa.mask | sb.mask) & sc.mask) continue;
          if (!detail::boxes_meet(sa.box, sb.box, sc.box)) continue;
          if (!ab_checked) {
            ab_ok = pair_memo.feasible(sa.mask, sa.idx, sb.mask, sb.idx);
            ab_checked = true;
          }
          if (!ab_ok) break;
          if (!pair_memo.feasible(sa.mask, sa.idx, sc.mask, sc.idx)) continue;
          if (!pair_memo.feasible(sb.mask, sb.idx, sc.mask, sc.idx)) continue;
          CandidateTriple t{{sa.idx, sb.idx, sc.idx}};
          if (triple_intersection(inst.lifted, t)) return t;
        }
      }
      return std::nullopt;
    };
    auto found = detail::first_in_groups<CandidateTriple>(count, jobs, group_fn);
    if (found) return std::move(found->second);
  }
  return std::nullopt;
}

} // namespace

DescentResult lemma1_descent(const LiftedInstance& inst, const CandidateTriple& seed, int jobs) {
  const PointConfig& lifted = inst.lifted;
  seed.validate(lifted.size());
  require(triple_intersection(lifted, seed).has_value(), ErrorKind::precondition,
          "lemma1_descent: seed triple hulls do not intersect");
  require(!m2_in_seed_intersection(inst, seed), ErrorKind::precondition,
          "lemma1_descent: M2 lies in the seed triple's intersection");

  uint64_t allowed = parts_special_mask(inst, seed.parts);
  auto subs = enumerate_descent_subsets(inst, allowed);
  const long long count = static_cast<long long>(subs.size());

  struct GroupAcc {
    bool has = false;
    Rat best;
    std::vector<std::array<int, 3>> ties;
  };
  std::vector<GroupAcc> groups(static_cast<size_t>(count));
  detail::PairFeasibility pair_memo(lifted);
  std::mutex best_mu;
  std::optional<Rat> shared_best;

  detail::parallel_for_groups(count, jobs, [&](long long a) {
    GroupAcc& acc = groups[static_cast<size_t>(a)];
    const DescentSubset& sa = subs[static_cast<size_t>(a)];
    std::optional<Rat> snapshot;
    {
      std::lock_guard<std::mutex> g(best_mu);
      snapshot = shared_best;
    }
    int since_sync = 0;
    for (long long b = a + 1; b < count; ++b) {
      const DescentSubset& sb = subs[static_cast<size_t>(b)];
      if (sa.mask & sb.mask) continue;
      if (!detail::boxes_meet(sa.box, sb.box)) continue;
      bool ab_checked = false, ab_ok = false;
      for (long long c = b + 1; c < count; ++c) {
        const DescentSubset& sc = subs[static_cast<size_t>(c)];
        if ((sa.mask | sb.mask) & sc.mask) continue;
        if (!detail::boxes_meet(sa.box, sb.box, sc.box)) continue;
        if (++since_sync >= 256) {
          since_sync = 0;
          std::lock_guard<std::mutex> g(best_mu);
          snapshot = shared_best;
        }
        Rat lb = sa.min_height;
        if (sb.min_height > lb) lb = sb.min_height;
        if (sc.min_height > lb) lb = sc.min_height;
        // candidates strictly above the best value can neither win nor tie
        if ((acc.has && lb > acc.best) || (snapshot && lb > *snapshot)) continue;
        if (!ab_checked) {
          ab_ok = pair_memo.feasible(sa.mask, sa.idx, sb.mask, sb.idx);
          ab_checked = true;
        }
        if (!ab_ok) break;
        if (!pair_memo.feasible(sa.mask, sa.idx, sc.mask, sc.idx)) continue;
        if (!pair_memo.feasible(sb.mask, sb.idx, sc.mask, sc.idx)) continue;
        auto r = min_last_coordinate(lifted, CandidateTriple{{sa.idx, sb.idx, sc.idx}});
        if (!r) continue;
        const Rat& v = r->first;
        if (!acc.has || v < acc.best) {
          acc.has = true;
          acc.best = v;
          acc.ties.clear();
          acc.ties.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
          std::lock_guard<std::mutex> g(best_mu);
          if (!shared_best || v < *shared_best) shared_best = v;
          snapshot = shared_best;
        } else if (v == acc.best) {
          acc.ties.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
        }
      }
    }
  });

  bool has = false;
  Rat best;
  std::vector<std::array<int, 3>> ties;
  for (const GroupAcc& g : groups) {
    if (!g.has) continue;
    if (!has || g.best < best) {
      has = true;
      best = g.best;
      ties = g.ties;
    } else if (g.best == best) {
      ties.insert(ties.end(), g.ties.begin(), g.ties.end());
    }
  }
  require(has, ErrorKind::internal, "lemma1_descent: candidate space empty despite a certified seed");
  require(best < inst.mast_heights[1], ErrorKind::invariant_violation,
          "lemma1_descent: minimizer not below M2");

  uint64_t specials = special_mask(inst);
  for (const auto& [a, b, c] : ties) {
    CandidateTriple t{{subs[static_cast<size_t>(a)].idx, subs[static_cast<size_t>(b)].idx,
                       subs[static_cast<size_t>(c)].idx}};
    auto r = min_last_coordinate(lifted, t);
    require(r.has_value() && r->first == best, ErrorKind::internal, "lemma1_descent: minimizer re-solve mismatch");
    const RatVector z = r->second.common_point;

    std::array<IndexSet, 3> parts;
    IntersectionCertificate cert;
    cert.common_point = z;
    for (int p = 0; p < 3; ++p) {
      IndexSet reduced = caratheodory_reduce(lifted, z, t.parts[static_cast<size_t>(p)]);
      IndexSet face = carrier_face(lifted, z, reduced);
      auto beta = barycentric_coordinates(lifted, z, face);
      require(beta.has_value(), ErrorKind::internal, "lemma1_descent: carrier face lost the point");
      parts[static_cast<size_t>(p)] = face;
      for (size_t i = 0; i < face.size(); ++i)
        cert.coefficients[static_cast<size_t>(p)].emplace_back(face[i], (*beta)[i]);
    }

    uint64_t used = parts_special_mask(inst, parts);
    require((used & ~allowed) == 0, ErrorKind::invariant_violation,
            "lemma1_descent: conclusion 3 violated by reduction");
    if (__builtin_popcountll(specials & ~used) < 2) continue; // conclusion 2 fails; next minimizer

    if (z.back().is_zero()) {
      for (const auto& part : parts)
        for (int i : part)
          require(!inst.is_mast(i), ErrorKind::invariant_violation,
                  "lemma1_descent: mast with positive weight at a base-plane minimizer");
    }
    require(verify_certificate(lifted, CandidateTriple{parts}, cert), ErrorKind::invariant_violation,
            "lemma1_descent: conclusion 1 certificate failed");
    return DescentResult{parts, z, cert, unused_special_labels(inst, used)};
  }
  fail(ErrorKind::guarantee_violated,
       "lemma1_descent: no minimizing triple satisfies conclusion 2 (paper guarantee violated on this instance)");
}

bool verify_descent_result(const LiftedInstance& inst, const CandidateTriple& seed, const DescentResult& d) {
  CandidateTriple t{d.parts};
  try {
    t.validate(inst.lifted.size());
  } catch (const Error&) {
    return false;
  }
  if (d.cert.common_point != d.z_prime) return false;
  if (!verify_certificate(inst.lifted, t, d.cert)) return false; // conclusion 1
  uint64_t specials = special_mask(inst);
  uint64_t used = parts_special_mask(inst, d.parts);
  if (__builtin_popcountll(specials & ~used) < 2) return false; // conclusion 2
  auto labels = unused_special_labels(inst, used);
  if (labels != d.unused_special) return false;
  uint64_t allowed = parts_special_mask(inst, seed.parts);
  return (used & ~allowed) == 0; // conclusion 3
}

CaseSplitResult case_split(const LiftedInstance& inst, const DescentResult& d) {
  const PointConfig& lifted = inst.lifted;
  const PointConfig& base = inst.base;
  CandidateTriple t{d.parts};
  t.validate(lifted.size());
  require(verify_certificate(lifted, t, d.cert), ErrorKind::precondition,
          "case_split: descent certificate does not verify");

  bool some_base_only = false;
  for (const auto& part : d.parts) {
    bool has_mast = false;
    for (int i : part)
      if (inst.is_mast(i)) has_mast = true;
    if (!has_mast) some_base_only = true;
  }

  if (some_base_only) {
    // Case 1: the minimizer lies in the base plane, which forces every part
    // mast-free (all certificate weights are strictly positive).
    require(d.z_prime.back().is_zero(), ErrorKind::invariant_violation,
            "case_split: base-only part with minimizer off the base plane");
    for (const auto& part : d.parts)
      for (int i : part)
        require(!inst.is_mast(i), ErrorKind::invariant_violation,
                "case_split: mast member in a case-1 descent result");
    CaseSplitResult res;
    res.case_tag = 1;
    res.base_parts = d.parts;
    IntersectionCertificate cert;
    cert.common_point = RatVector(d.z_prime.begin(), d.z_prime.end() - 1);
    cert.coefficients = d.cert.coefficients;
    require(verify_certificate(base, CandidateTriple{res.base_parts}, cert), ErrorKind::invariant_violation,
            "case_split: case-1 certificate failed on the base");
    res.cert = std::move(cert);
    return res;
  }

  // Case 2: conclusion 2 forces exactly one mast per part and A1 in none.
  std::array<int, 3> mast{};
  std::array<IndexSet, 3> rest;
  for (int p = 0; p < 3; ++p) {
    int mast_count = 0;
    for (int i : d.parts[static_cast<size_t>(p)]) {
      require(i != 0, ErrorKind::invariant_violation, "case_split: A1 inside a case-2 part");
      if (inst.is_mast(i)) {
        mast[static_cast<size_t>(p)] = i;
        ++mast_count;
      } else {
        rest[static_cast<size_t>(p)].push_back(i);
      }
    }
    require(mast_count == 1, ErrorKind::invariant_violation, "case_split: case-2 part without exactly one mast");
  }

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return mast[static_cast<size_t>(x)] < mast[static_cast<size_t>(y)]; });
  std::array<int, 3> highest{mast[static_cast<size_t>(order[0])], mast[static_cast<size_t>(order[1])],
                             mast[static_cast<size_t>(order[2])]};

  CaseSplitResult res;
  res.case_tag = 2;
  res.highest_vertices = highest;
  res.base_parts[0] = rest[static_cast<size_t>(order[0])];
  res.base_parts[0].insert(res.base_parts[0].begin(), 0); // pi maps the mast to A1
  res.base_parts[1] = rest[static_cast<size_t>(order[1])];
  res.base_parts[2] = rest[static_cast<size_t>(order[2])];
  if (res.base_parts[1].empty() || res.base_parts[2].empty()) {
    res.retry = true; // singleton-mast part; unreachable per the line analysis, retried defensively
    return res;
  }
  // Central projection fixes the base-plane members exactly; checked, not trusted.
  for (int p = 1; p <= 2; ++p) {
    const RatVector& w = lifted[highest[static_cast<size_t>(p)]];
    for (int i : res.base_parts[static_cast<size_t>(p)])
      require(central_project(w, lifted[i]) == lifted[i], ErrorKind::invariant_violation,
              "case_split: central projection moved a base point");
  }
  auto cert = triple_intersection(base, CandidateTriple{res.base_parts});
  if (!cert) {
    res.retry = true; // projected hulls missed: mast heights insufficient
    return res;
  }
  res.cert = std::move(*cert);
  return res;
}

ReductionTrace run_reduction(const PointConfig& original, int k, const ReductionOptions& opts) {
  require(k >= 1, ErrorKind::input, "run_reduction: k must be positive");
  require(original.dim == 3 * k - 1, ErrorKind::precondition, "run_reduction: base dimension must be 3k-1");
  require(original.size() == 6 * k + 1, ErrorKind::precondition, "run_reduction: base must have 6k+1 points");
  require(is_general_position(original).ok, ErrorKind::precondition, "run_reduction: base not in general position");
  if (opts.height_override) {
    Rat prev;
    for (const Rat& h : *opts.height_override) {
      require(h > prev, ErrorKind::input, "run_reduction: height override must be increasing and positive");
      prev = h;
    }
  }

  // Lexicographically smallest point is always a hull vertex; move it to index 0.
  int lexmin = 0;
  for (int i = 1; i < original.size(); ++i) {
    if (std::lexicographical_compare(original[i].begin(), original[i].end(), original[lexmin].begin(),
                                     original[lexmin].end(),
                                     [](const Rat& a, const Rat& b) { return a < b; }))
      lexmin = i;
  }
  std::vector<int> order{lexmin};
  for (int i = 0; i < original.size(); ++i)
    if (i != lexmin) order.push_back(i);
  PointConfig working = original.subset(order);
  const RatVector a1_original = working[0];

  SplitMix64 rng(opts.perturb_seed);
  bool perturbed = false;
  bool params_valid = false;
  Rat eps, delta;
  std::array<Rat, 4> base_heights;
  std::vector<std::string> attempt_log;

  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    if (attempt >= 3) {
      // Deterministic shrinking perturbation of A1, revalidating the instance.
      require(params_valid, ErrorKind::internal, "run_reduction: perturbation before epsilon is known");
      Rat scale = eps / Rat(4) * Rat::pow2(-(attempt - 3) - 1);
      for (int draw = 0; draw < 64; ++draw) {
        RatVector cand = a1_original;
        for (int c = 0; c < working.dim; ++c) {
          long long num = rng.int_in(1, 1 << 20);
          Rat off = scale * Rat(num, 1ll << 21); // magnitude < eps/4
          if (rng.below(2)) off = -off;
          cand[static_cast<size_t>(c)] += off;
        }
        PointConfig trial = working;
        trial.points[0] = cand;
        if (!is_general_position(trial).ok) continue;
        if (!is_vertex(trial, 0)) continue;
        working = std::move(trial);
        perturbed = true;
        params_valid = false;
        break;
      }
    }
    if (!params_valid) {
      eps = compute_epsilon(working);
      delta = compute_delta_bound(working, eps, k == 1 ? 0 : 3 * k);
      base_heights = opts.height_override ? *opts.height_override : compute_mast_heights(working, delta);
      params_valid = true;
    }
    std::array<Rat, 4> heights = base_heights;
    for (Rat& h : heights) h *= Rat::pow2(attempt);

    LiftedInstance inst = make_lifted_instance(working, k, eps, delta, heights);

    // Seed satisfying Lemma 1's hypothesis: first VKF witness with M2 outside
    // its intersection; if every VKF witness fails (all five specials used),
    // fall back to a general special-missing triple, which the paper's
    // existence argument covers and which forces the hypothesis.
    VkfWitness vkf;
    CandidateTriple seed;
    auto m2_free = [&](const VkfWitness& w) { return !m2_in_seed_intersection(inst, CandidateTriple{w.parts}); };
    try {
      vkf = find_vkf3(inst.lifted, k, opts.jobs, opts.fast_vkf, m2_free);
      seed = CandidateTriple{vkf.parts};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::exhaustion) throw;
      vkf = find_vkf3(inst.lifted, k, opts.jobs, opts.fast_vkf); // trace still records a witness
      auto fallback = find_special_missing_seed(inst, opts.jobs);
      if (!fallback) {
        attempt_log.push_back("attempt " + std::to_string(attempt) +
                              ": every intersecting triple uses all five special points");
        continue;
      }
      seed = std::move(*fallback);
    }
    DescentResult descent;
    try {
      descent = lemma1_descent(inst, seed, opts.jobs);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::guarantee_violated) {
        attempt_log.push_back("attempt " + std::to_string(attempt) + ": " + e.what());
        continue;
      }
      throw;
    }
    CaseSplitResult cs = case_split(inst, descent);
    if (cs.retry) {
      attempt_log.push_back("attempt " + std::to_string(attempt) + ": case-2 projection not certified");
      continue;
    }

    std::array<IndexSet, 3> mapped;
    for (int p = 0; p < 3; ++p) {
      for (int i : cs.base_parts[static_cast<size_t>(p)])
        mapped[static_cast<size_t>(p)].push_back(order[static_cast<size_t>(i)]);
      std::sort(mapped[static_cast<size_t>(p)].begin(), mapped[static_cast<size_t>(p)].end());
    }
    auto final_cert = triple_intersection(original, CandidateTriple{mapped});
    if (!final_cert) {
      attempt_log.push_back("attempt " + std::to_string(attempt) +
                            ": projected partition not certified on the original points");
      continue;
    }
    TverbergWitness w = complete_partition(original, CandidateTriple{mapped}, *final_cert);
    require(verify_witness(original, w), ErrorKind::invariant_violation,
            "run_reduction: final witness failed re-verification");
    ReductionTrace trace;
    trace.instance = std::move(inst);
    trace.base_order = order;
    trace.a1_perturbed = perturbed;
    trace.vkf = std::move(vkf);
    trace.seed = std::move(seed);
    trace.descent = std::move(descent);
    trace.case_tag = cs.case_tag;
    trace.highest_vertices = cs.highest_vertices;
    trace.projected_parts = mapped;
    trace.retries = attempt;
    trace.final_witness = std::move(w);
    return trace;
  }

  std::string log;
  for (const auto& line : attempt_log) log += "\n  " + line;
  fail(ErrorKind::reduction_failed, "run_reduction: retry budget exhausted" + log);
}

} // namespace tvk
