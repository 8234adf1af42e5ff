#include "support.hpp"

#include "elastinet/cli.hpp"
#include "elastinet/snapshot.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace elastinet;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "elastinet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "elastinet_cli_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    CHECK(cli({"check", "triod-straight", "--grid", "32"}).code == kExitPass);
    CHECK(cli({"check", "theta-degenerate", "--grid", "64"}).code == kExitFail);
    CHECK(cli({"ls", "theta-degenerate", "--grid", "64"}).code == kExitFail);
    CHECK(cli({"check", "theta-twisted", "--grid", "64"}).code == kExitFail);
    CHECK(cli({"check", "no-such-file.json"}).code == kExitError);
    CHECK(cli({"check", "triod-straight", "--grid", "4"}).code == kExitError);
    CHECK(cli({"frobnicate"}).code == kExitError);
    CHECK(cli({"check"}).code == kExitError);
  }

  TEST_CASE("corrupted snapshot") {
    const auto dir = scratch("corrupt");
    write_text_file(dir / "bad.json", "{\"topology\": \"theta\", \"mu\": ");
    const Result r = cli({"check", (dir / "bad.json").string()});
    CHECK(r.code == kExitError);
    CHECK_FALSE(r.err.empty());
  }

  TEST_CASE("scenario, reparam and check chain") {
    const auto dir = scratch("chain");
    const auto raw = (dir / "raw.json").string();
    const auto fixed = (dir / "fixed.json").string();
    REQUIRE(cli({"scenario", "theta-twisted", "--grid", "128", "--seed", "2", "--out", raw}).code == kExitPass);
    CHECK(cli({"check", raw}).code == kExitFail);
    REQUIRE(cli({"reparam", raw, "--out", fixed}).code == kExitPass);
    CHECK(cli({"check", fixed}).code == kExitPass);
  }

  TEST_CASE("ls prints JSON") {
    const Result r = cli({"ls", "triod-straight", "--grid", "32"});
    CHECK(r.code == kExitPass);
    CHECK(r.out.find("\"min_sigma\"") != std::string::npos);
  }

  TEST_CASE("simulate writes its outputs deterministically") {
    std::vector<std::string> names;
    for (const char* run : {"a", "b"}) {
      const auto dir = scratch(run);
      const Result r = cli({"simulate", "triod-perturbed", "--grid", "32", "--t-final", "1e-3", "--snapshot-every",
                            "5", "--out", dir.string()});
      REQUIRE(r.code == kExitPass);
      CHECK(std::filesystem::exists(dir / "trace.csv"));
      CHECK(std::filesystem::exists(dir / "trace.json"));
      CHECK(std::filesystem::exists(dir / "frame_0000.svg"));
    }
    const auto a = std::filesystem::temp_directory_path() / "elastinet_cli_test" / "a";
    const auto b = std::filesystem::temp_directory_path() / "elastinet_cli_test" / "b";
    for (const auto& entry : std::filesystem::directory_iterator(a)) {
      const auto name = entry.path().filename();
      CHECK(read_text_file(a / name) == read_text_file(b / name));
    }
  }

  TEST_CASE("simulate needs an output directory") {
    CHECK(cli({"simulate", "triod-straight", "--grid", "32"}).code == kExitError);
  }

  TEST_CASE("inadmissible simulate input fails") {
    const auto dir = scratch("bad");
    CHECK(cli({"simulate", "theta-twisted", "--grid", "64", "--out", dir.string()}).code == kExitFail);
  }

  TEST_CASE("config file") {
    const auto dir = scratch("config");
    write_text_file(dir / "run.toml", "grid = 32\n");
    CHECK(cli({"--config", (dir / "run.toml").string(), "check", "triod-straight"}).code == kExitPass);
    write_text_file(dir / "bad.toml", "no_such_key = 1\n");
    CHECK(cli({"--config", (dir / "bad.toml").string(), "check", "triod-straight"}).code == kExitError);
  }
}
