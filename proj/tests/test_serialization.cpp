#include "doctest.h"

#include "srp/errors.hpp"
#include "srp/serialization.hpp"

using namespace srp;

TEST_CASE("environment round trip") {
  const auto env = sample_environment(2, Box(Site{-2, 0}, Site{3, 4}), 0.4, 12);
  const Json j = to_json(env);
  CHECK(environment_from_json(j) == env);
  CHECK(environment_from_json(Json::parse(j.dump())) == env);
  CHECK_THROWS_AS(environment_from_json(Json::parse(R"({"dim": 1})")), Error);
  CHECK_THROWS_AS(environment_from_json(Json::parse(R"({"dim": 1, "box": [[0, 2]], "sites": [[1, -1]]})")), Error);
}

TEST_CASE("continuum round trip is exact") {
  const auto pts = sample_continuum(3, RealBox{{0, 0, 0}, {2, 2, 2}}, 1.5, 4);
  CHECK(continuum_from_json(Json::parse(to_json(pts).dump())) == pts);
}

TEST_CASE("gas round trip") {
  const GasConfig g({Cycle({{Site{1, 0}, 2}, {Site{0, 0}, 1}, {Site{0, 1}, 1}}), Cycle({{Site{4, 4}, 1}, {Site{4, 4}, 2}})});
  const Json j = to_json(g);
  CHECK(j.dump() == R"([[[[0,0],1],[[0,1],1],[[1,0],2]],[[[4,4],1],[[4,4],2]]])");
  CHECK(gas_from_json(j) == g);
  CHECK(point_from_json(to_json(PointId{Site{3}, 2})) == PointId{Site{3}, 2});
  CHECK_THROWS_AS(gas_from_json(Json::parse("[[[[0],1],[[0],1]]]")), Error);
  CHECK_THROWS_AS(gas_from_json(Json::parse("[[1,2]]")), Error);
}

TEST_CASE("digest") {
  CHECK(digest_hex("") == "cbf29ce484222325");
  CHECK(digest_hex("a") == "af63dc4c8601ec8c");
  CHECK(digest_hex("abc") != digest_hex("abd"));
}
