#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "tvk/io.hpp"
#include "tvk/tverberg.hpp"
#include "tvk/vkf.hpp"

using namespace tvk;

namespace {

PointConfig square_and_axis() {
  return PointConfig(2, {{Rat(1), Rat(1)}, {Rat(-1), Rat(-1)}, {Rat(-1), Rat(1)}, {Rat(1), Rat(-1)},
                         {Rat(0), Rat(0)}, {Rat(2), Rat(0)}, {Rat(-2), Rat(0)}});
}

PointConfig spec_vkf_example() {
  // three origin-containing coplanar triangles plus two spares off the plane
  return PointConfig(3, {{Rat(2), Rat(0), Rat(0)}, {Rat(-2), Rat(2), Rat(0)}, {Rat(-2), Rat(-2), Rat(0)},
                         {Rat(-2), Rat(0), Rat(0)}, {Rat(2), Rat(2), Rat(0)}, {Rat(2), Rat(-2), Rat(0)},
                         {Rat(0), Rat(3), Rat(0)}, {Rat(3), Rat(-3), Rat(0)}, {Rat(-3), Rat(-3), Rat(0)},
                         {Rat(0), Rat(0), Rat(5)}, {Rat(0), Rat(0), Rat(7)}});
}

bool same_partition(const std::array<IndexSet, 3>& a, const std::array<IndexSet, 3>& b) {
  std::set<IndexSet> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  return sa == sb;
}

} // namespace

TEST_CASE("partition enumeration is canonical and complete") {
  auto parts = enumerate_partitions3(7);
  CHECK(parts.size() == 301); // S(7,3)
  // canonical order: block tuples compared lexicographically
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto& a = parts[i];
    const auto& b = parts[i + 1];
    bool less = tuple_less(a[0], b[0]) ||
                (a[0] == b[0] && (tuple_less(a[1], b[1]) || (a[1] == b[1] && tuple_less(a[2], b[2]))));
    CHECK(less);
  }
  // every partition covers all indices with block minima sorted
  for (const auto& p : parts) {
    CHECK(p[0].front() == 0);
    CHECK(p[0].size() + p[1].size() + p[2].size() == 7);
    CHECK(p[1].front() < p[2].front());
  }
  CHECK(enumerate_partitions3(9).size() == 3025); // S(9,3)
}

TEST_CASE("find_tverberg3 on the square-and-axis configuration") {
  PointConfig c = square_and_axis();
  TverbergWitness w = find_tverberg3(c);
  CHECK(verify_witness(c, w));

  // the witness partition appears in the oracle's valid set
  auto all = brute_force_all(c);
  CHECK(!all.empty());
  bool contained = false;
  for (const auto& [t, cert] : all)
    if (same_partition(t.parts, w.parts)) contained = true;
  CHECK(contained);

  // the symmetry-forced partition from the statement is among the valid ones
  std::array<IndexSet, 3> listed{IndexSet{0, 1}, IndexSet{2, 3}, IndexSet{4, 5, 6}};
  bool listed_found = false;
  for (const auto& [t, cert] : all)
    if (same_partition(t.parts, listed)) listed_found = true;
  CHECK(listed_found);
}

TEST_CASE("find_tverberg3 succeeds on random general-position 7-point configs") {
  for (int seed = 0; seed < 25; ++seed) {
    PointConfig c = generate_instance(9000 + seed, 7, 2, 32);
    TverbergWitness w = find_tverberg3(c, 2);
    CHECK(verify_witness(c, w));
  }
}

TEST_CASE("find_tverberg3 parts appear in brute_force_all (oracle containment)") {
  for (int seed = 0; seed < 6; ++seed) {
    PointConfig c = generate_instance(9100 + seed, 7, 2, 32);
    TverbergWitness w = find_tverberg3(c);
    auto all = brute_force_all(c, 2);
    bool contained = false;
    for (const auto& [t, cert] : all)
      if (same_partition(t.parts, w.parts)) contained = true;
    CHECK(contained);
  }
}

TEST_CASE("9 random general-position points in R^3 always admit a witness") {
  for (int seed = 0; seed < 3; ++seed) {
    PointConfig c = generate_instance(9200 + seed, 9, 3, 16);
    TverbergWitness w = find_tverberg3(c, 2);
    CHECK(verify_witness(c, w));
    auto all = brute_force_all(c, 2);
    bool contained = false;
    for (const auto& [t, cert] : all)
      if (same_partition(t.parts, w.parts)) contained = true;
    CHECK(contained);
  }
}

TEST_CASE("brute_force_all edge cases") {
  PointConfig tri(2, {{Rat(0), Rat(0)}, {Rat(4), Rat(0)}, {Rat(0), Rat(4)}});
  CHECK(brute_force_all(tri).empty()); // three singleton blocks cannot meet

  // degenerate collinear input is searched without any general-position demand
  PointConfig collinear(2, {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(2), Rat(0)}, {Rat(3), Rat(0)},
                            {Rat(4), Rat(0)}, {Rat(5), Rat(0)}, {Rat(6), Rat(0)}});
  auto all = brute_force_all(collinear);
  CHECK(!all.empty());
  for (const auto& [t, cert] : all) CHECK(verify_certificate(collinear, t, cert));

  PointConfig big = generate_instance(1, 13, 2, 8);
  CHECK_THROWS_AS(brute_force_all(big), Error); // size guard
}

TEST_CASE("find_tverberg3 exhaustion on a nondegenerate triangle") {
  PointConfig tri(2, {{Rat(0), Rat(0)}, {Rat(4), Rat(0)}, {Rat(0), Rat(4)}});
  CHECK_THROWS_AS(find_tverberg3(tri), Error);
}

TEST_CASE("complete_partition") {
  PointConfig c = square_and_axis();
  CandidateTriple t{{IndexSet{0, 1}, IndexSet{2, 3}, IndexSet{4, 5, 6}}};
  auto cert = triple_intersection(c, t);
  REQUIRE(cert.has_value());

  // full cover: unchanged
  TverbergWitness w = complete_partition(c, t, *cert);
  CHECK(same_partition(w.parts, t.parts));
  CHECK(verify_witness(c, w));

  // drop a point from part 1: it returns there
  CandidateTriple partial{{IndexSet{0, 1}, IndexSet{2, 3}, IndexSet{4, 5}}};
  auto cert2 = triple_intersection(c, partial);
  REQUIRE(cert2.has_value());
  TverbergWitness w2 = complete_partition(c, partial, *cert2);
  CHECK(w2.parts[0] == IndexSet{0, 1, 6});
  CHECK(w2.cert.common_point == cert2->common_point);
  CHECK(verify_witness(c, w2));

  // invalid certificate is rejected
  IntersectionCertificate bad = *cert;
  bad.coefficients[0][0].second = -bad.coefficients[0][0].second;
  CHECK_THROWS_AS(complete_partition(c, t, bad), Error);
}

TEST_CASE("complete_partition output always passes verify_witness") {
  for (int seed = 0; seed < 10; ++seed) {
    PointConfig c = generate_instance(9300 + seed, 8, 2, 16);
    CandidateTriple t{{IndexSet{0, 1, 2}, IndexSet{3, 4}, IndexSet{5, 6}}};
    auto cert = triple_intersection(c, t);
    if (!cert) continue;
    CHECK(verify_witness(c, complete_partition(c, t, *cert)));
  }
}

TEST_CASE("verify_witness rejects corrupted witnesses") {
  PointConfig c = square_and_axis();
  TverbergWitness w = find_tverberg3(c);
  REQUIRE(verify_witness(c, w));

  TverbergWitness negated = w;
  REQUIRE(!negated.cert.coefficients[0].empty());
  negated.cert.coefficients[0][0].second = -negated.cert.coefficients[0][0].second;
  CHECK(!verify_witness(c, negated));

  TverbergWitness uncovering = w;
  uncovering.parts[0].pop_back();
  CHECK(!verify_witness(c, uncovering));

  TverbergWitness overlapping = w;
  overlapping.parts[0].push_back(overlapping.parts[1][0]);
  std::sort(overlapping.parts[0].begin(), overlapping.parts[0].end());
  CHECK(!verify_witness(c, overlapping));
}

// ---- van Kampen-Flores ----

TEST_CASE("find_vkf3 on the coplanar-triangles example") {
  PointConfig c = spec_vkf_example();
  // the listed triple is itself valid: each triangle contains the origin
  CandidateTriple listed{{IndexSet{0, 1, 2}, IndexSet{3, 4, 5}, IndexSet{6, 7, 8}}};
  auto cert = triple_intersection(c, listed);
  REQUIRE(cert.has_value());
  CHECK(hull_membership(c, {Rat(0), Rat(0), Rat(0)}, listed.parts[0]).has_value());

  VkfWitness w = find_vkf3(c, 1);
  CHECK(verify_vkf(c, w));
  for (const auto& part : w.parts) CHECK(part.size() == 3);
}

TEST_CASE("find_vkf3 succeeds on random 11-point configs in R^3") {
  for (int seed = 0; seed < 5; ++seed) {
    PointConfig c = generate_instance(9400 + seed, 11, 3, 16);
    VkfWitness w = find_vkf3(c, 1, 2);
    CHECK(verify_vkf(c, w));
  }
}

TEST_CASE("find_vkf3 returns the canonical-first valid triple (independent scan oracle)") {
  PointConfig c = generate_instance(9500, 11, 3, 16);
  VkfWitness w = find_vkf3(c, 1, 2);

  // plain unfiltered rescan in canonical order
  IndexSet all;
  for (int i = 0; i < 11; ++i) all.push_back(i);
  std::optional<std::array<IndexSet, 3>> first;
  std::vector<IndexSet> combos;
  {
    IndexSet cur;
    std::function<void(size_t)> rec = [&](size_t start) {
      if (cur.size() == 3) {
        combos.push_back(cur);
        return;
      }
      for (size_t i = start; i < all.size(); ++i) {
        cur.push_back(all[i]);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  for (const auto& p1 : combos) {
    if (first) break;
    for (const auto& p2 : combos) {
      if (first) break;
      if (!tuple_less(p1, p2)) continue;
      bool dis12 = true;
      for (int i : p2)
        if (std::binary_search(p1.begin(), p1.end(), i)) dis12 = false;
      if (!dis12) continue;
      for (const auto& p3 : combos) {
        if (!tuple_less(p2, p3)) continue;
        bool dis = true;
        for (int i : p3)
          if (std::binary_search(p1.begin(), p1.end(), i) || std::binary_search(p2.begin(), p2.end(), i)) dis = false;
        if (!dis) continue;
        if (triple_intersection(c, {{p1, p2, p3}})) {
          first = {{p1, p2, p3}};
          break;
        }
      }
    }
  }
  REQUIRE(first.has_value());
  CHECK(w.parts == *first);
}

TEST_CASE("vkf search is invariant under relabeling followed by canonical reordering") {
  // permuting the input points and re-sorting them into the canonical
  // (coordinate-lexicographic) order presents the scan with the same sequence,
  // so the found triple is the same set of points
  PointConfig c = generate_instance(9600, 11, 3, 16);
  auto lex_sorted = [](const PointConfig& cfg) {
    std::vector<RatVector> pts = cfg.points;
    std::sort(pts.begin(), pts.end(), [](const RatVector& a, const RatVector& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                          [](const Rat& x, const Rat& y) { return x < y; });
    });
    return PointConfig(cfg.dim, pts);
  };
  PointConfig canon = lex_sorted(c);

  std::vector<RatVector> rotated;
  for (int i = 0; i < 11; ++i) rotated.push_back(c[(i + 4) % 11]);
  PointConfig canon2 = lex_sorted(PointConfig(3, rotated));
  REQUIRE(canon.points == canon2.points);

  VkfWitness w1 = find_vkf3(canon, 1, 2);
  VkfWitness w2 = find_vkf3(canon2, 1, 2);
  CHECK(w1.parts == w2.parts);
  CHECK(verify_vkf(canon, w1));
}

TEST_CASE("verify_vkf rejects malformed witnesses") {
  PointConfig c = spec_vkf_example();
  VkfWitness w = find_vkf3(c, 1);
  REQUIRE(verify_vkf(c, w));

  VkfWitness short_part = w;
  short_part.parts[0].pop_back(); // size 2k
  CHECK(!verify_vkf(c, short_part));

  VkfWitness overlap = w;
  overlap.parts[0][0] = overlap.parts[1][0];
  std::sort(overlap.parts[0].begin(), overlap.parts[0].end());
  CHECK(!verify_vkf(c, overlap));

  VkfWitness wrong_k = w;
  wrong_k.k = 2;
  CHECK(!verify_vkf(c, wrong_k));
}

TEST_CASE("fast mode returns a valid witness") {
  PointConfig c = generate_instance(9700, 11, 3, 16);
  VkfWitness w = find_vkf3(c, 1, 2, true);
  CHECK(verify_vkf(c, w));
}
