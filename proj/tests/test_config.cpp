#include <filesystem>

#include "doctest.h"
#include "pkem/config.hpp"
#include "pkem/errors.hpp"

using namespace pkem;
using namespace pkem::config;

TEST_CASE("bsc shorthand and explicit tables") {
  const auto s = source_from_json(Json::parse(R"({"bsc":{"p":0.1,"q":0.3,"n":16}})"));
  CHECK(s.n() == 16);
  CHECK(s.prob(0, 1, 1) == doctest::Approx(0.5 * 0.1 * 0.3));
  CHECK(source_to_json(s) == Json::parse(R"({"bsc":{"p":0.1,"q":0.3,"n":16}})"));

  const auto t = source_from_json(Json::parse(
      R"({"alphabet":[2,2,1],"n":3,"pxyz":[[0,0,0,"3/8"],[1,1,0,"3/8"],[0,1,0,"1/8"],[1,0,0,"1/8"]]})"));
  REQUIRE(t.exact().has_value());
  CHECK(t.exact()->denominator == 8);
  CHECK(t.prob(1, 0, 0) == 0.125);
  const auto back = source_from_json(source_to_json(t));
  CHECK(back.table() == t.table());
  CHECK(back.exact().has_value());

  const auto mixed =
      source_from_json(Json::parse(R"({"alphabet":[2,2,1],"n":2,"pxyz":[[0,0,0,0.3],[1,1,0,0.7]]})"));
  CHECK_FALSE(mixed.exact().has_value());
}

TEST_CASE("malformed sources") {
  for (const char* bad : {
           R"([1,2])",
           R"({"alphabet":[2,2,1],"n":2})",
           R"({"alphabet":[2,2,1],"n":2,"pxyz":[[0,0,0,"1/2"],[1,1,0,"1/3"]]})",
           R"({"alphabet":[2,2,1],"n":2,"pxyz":[[0,0,0,"1/0"],[1,1,0,"1/2"]]})",
           R"({"alphabet":[2,2,1],"n":2,"pxyz":[[0,2,0,1.0]]})",
           R"({"alphabet":[2,2,1],"n":2,"pxyz":[[0,0,0,"x"]]})",
           R"({"alphabet":[2,2,1],"n":2,"pxyz":[[0,0,0,-1],[1,1,0,2]]})",
           R"({"alphabet":[0,2,1],"n":2,"pxyz":[]})",
           R"({"bsc":{"p":0.1}})",
       })
    CHECK_THROWS_AS(source_from_json(Json::parse(bad)), MalformedError);
}

TEST_CASE("parameter documents round trip") {
  IkemParams p(Mode::cca, SourceSpec::bsc(0.02, 0.3, 64));
  p.t = 20;
  p.ell = 8;
  p.nu = 14.5;
  p.q_d = 3;
  p.validate();
  const Json j = params_to_json(p);
  const IkemParams q = params_from_json(j);
  CHECK(params_to_json(q) == j);
  CHECK(resolve_params(j).t == 20);
  CHECK_THROWS_AS(resolve_params(j, "cea"), InvalidArgument);
  Json broken = j;
  broken["mode"] = "nope";
  CHECK_THROWS_AS(params_from_json(broken), MalformedError);
  broken = j;
  broken.erase("t");
  CHECK_THROWS_AS(params_from_json(broken), MalformedError);
}

TEST_CASE("derivation requests") {
  const Json req = Json::parse(R"({"mode":"cea","source":{"bsc":{"p":0.02,"q":0.3,"n":1000}},"epsilon":0.001})");
  const IkemParams p = resolve_params(req);
  CHECK(p.mode == Mode::cea);
  CHECK(p.ell > 0);
  CHECK(resolve_params(req, "baseline").mode == Mode::baseline);
  CHECK_THROWS_AS(request_from_json(Json::parse(R"({"epsilon":1.5})")), InvalidArgument);
  CHECK_THROWS_AS(request_from_json(Json::parse(R"({})")), InvalidArgument);
  CHECK_NOTHROW(request_from_json(Json::parse(R"({"nu":10})")));
  CHECK_THROWS_AS(request_from_json(Json::parse(R"({"epsilon":0.1,"sigma":0})")), InvalidArgument);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "pkem_config_test";
  std::filesystem::create_directories(dir);
  write_file(dir / "s.bin", Bytes{0, 1, 1, 0});
  CHECK(read_file(dir / "s.bin") == Bytes{0, 1, 1, 0});
  CHECK(read_symbols(dir / "s.bin", 4, 2) == SymbolString{0, 1, 1, 0});
  CHECK_THROWS_AS(read_symbols(dir / "s.bin", 5, 2), MalformedError);
  write_file(dir / "t.bin", Bytes{0, 3});
  CHECK_THROWS_AS(read_symbols(dir / "t.bin", 2, 2), MalformedError);
  CHECK_THROWS_AS(read_file(dir / "missing.bin"), MalformedError);
  write_file(dir / "j.json", Bytes{'{', 'x'});
  CHECK_THROWS_AS(read_json(dir / "j.json"), MalformedError);
  std::filesystem::remove_all(dir);
}
