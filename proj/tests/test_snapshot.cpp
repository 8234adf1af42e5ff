#include "support.hpp"

#include "elastinet/errors.hpp"
#include "elastinet/scenario.hpp"
#include "elastinet/snapshot.hpp"

#include <doctest.h>

#include <filesystem>

using namespace elastinet;
using namespace elastinet::testing;

TEST_SUITE("snapshot") {
  TEST_CASE("round trip is bit exact") {
    for (const char* name : {"theta-twisted", "triod-perturbed"}) {
      const Scenario s = make_scenario(name, {.intervals = 32, .seed = 9});
      const std::string text = snapshot_json(s.network, s.params);
      const LoadedNetwork back = parse_snapshot(text);
      CHECK(back.params.mu == s.params.mu);
      CHECK(back.net.topology() == s.network.topology());
      CHECK(back.net.endpoints() == s.network.endpoints());
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j <= 32; ++j)
          CHECK(back.net.curve(i).position()[j] == s.network.curve(i).position()[j]);
      CHECK(snapshot_json(back.net, back.params) == text);
    }
  }

  TEST_CASE("real formatting round trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_real(v)) == v);
    CHECK(std::signbit(std::stod(format_real(-0.0))));
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_snapshot("{"), FormatError);
    CHECK_THROWS_AS(parse_snapshot(R"({"topology": "Square", "mu": 1, "curves": []})"), FormatError);
    CHECK_THROWS_AS(parse_snapshot(R"({"topology": "theta", "mu": 1, "curves": [[[0,0]],[[0,0]],[[0,0]]]})"),
                    FormatError);
  }

  TEST_CASE("files") {
    const auto dir = std::filesystem::temp_directory_path() / "elastinet_snapshot_test";
    std::filesystem::create_directories(dir);
    const Scenario s = make_scenario("theta-symmetric", {.intervals = 64});
    save_snapshot(dir / "a.json", s.network, s.params);
    const LoadedNetwork back = load_snapshot(dir / "a.json");
    CHECK(back.net.curve(2).position()[17] == s.network.curve(2).position()[17]);
    CHECK_THROWS_AS(load_snapshot(dir / "missing.json"), IoError);
    CHECK_THROWS_AS(save_snapshot(dir / "no" / "such" / "dir.json", s.network, s.params), IoError);
    std::filesystem::remove_all(dir);
  }
}
