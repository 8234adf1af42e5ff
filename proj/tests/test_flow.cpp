#include "support.hpp"

#include "elastinet/errors.hpp"
#include "elastinet/flow.hpp"
#include "elastinet/scenario.hpp"

#include <doctest.h>

#include <sstream>

using namespace elastinet;
using namespace elastinet::testing;

namespace {

double max_displacement(const NetworkState& a, const NetworkState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < a.curve(i).size(); ++j)
      m = std::max(m, norm(a.curve(i).position()[j] - b.curve(i).position()[j]));
  return m;
}

} // namespace

TEST_SUITE("flow") {
  TEST_CASE("scheme configuration validation") {
    SchemeConfig c;
    CHECK_NOTHROW(c.validate());
    c.dt_min = 1.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = SchemeConfig{};
    c.t_final = -1.0;
    CHECK_THROWS_AS(c.validate(), Error);
  }

  TEST_CASE("straight triod is stationary") {
    const Scenario s = make_scenario("triod-straight", {.intervals = 32});
    SchemeConfig c;
    c.t_final = 0.01;
    const FlowTrace trace = run(s.network, c, s.params, s.flavor);
    CHECK(trace.termination == "t_final");
    CHECK(trace.final_state.time == c.t_final);
    CHECK(trace.rejected_steps == 0);
    CHECK(max_displacement(trace.final_state.net, s.network) < 1e-10);
  }

  TEST_CASE("perturbed triod loses energy and keeps its boundary rows") {
    const Scenario s = make_scenario("triod-perturbed", {.intervals = 32});
    SchemeConfig c;
    c.t_final = 5e-3;
    const FlowTrace trace = run(s.network, c, s.params, s.flavor);
    REQUIRE(trace.termination == "t_final");
    const double e0 = trace.records.front().energy;
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
      const auto& r = trace.records[k];
      CHECK(r.energy <= trace.records[k - 1].energy + c.energy_tolerance * r.dt * e0);
    }
    CHECK(trace.records.back().energy < e0);
    CHECK(trace.max_linear_residual < 1e-8);
    CHECK(trace.final_state.net.endpoints() == s.network.endpoints());
  }

  TEST_CASE("one step commutes with a rigid motion") {
    const Scenario s = make_scenario("triod-perturbed", {.intervals = 32});
    const RigidMotion m{0.4, {1.0, -2.0}, false};
    const FlowState a = step(initial_state(s.network, s.params), 1e-4, s.params, s.flavor);
    const FlowState b = step(initial_state(s.network.transformed(m), s.params), 1e-4, s.params, s.flavor);
    CHECK(max_displacement(a.net.transformed(m), b.net) < 1e-10);
    CHECK(b.energy == doctest::Approx(a.energy).epsilon(1e-12));
  }

  TEST_CASE("inadmissible initial data is refused") {
    const Scenario s = make_scenario("theta-twisted", {.intervals = 64, .seed = 1});
    CHECK_THROWS_AS(run(s.network, SchemeConfig{}, s.params, s.flavor), AdmissibilityError);
  }

  TEST_CASE("trace serialization") {
    const Scenario s = make_scenario("triod-perturbed", {.intervals = 32});
    SchemeConfig c;
    c.t_final = 1e-3;
    c.snapshot_every = 4;
    const FlowTrace trace = run(s.network, c, s.params, s.flavor);
    const std::string csv = trace.to_csv();
    std::istringstream in(csv);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == trace.records.size() + 1);
    CHECK(trace.snapshots.size() >= 3);
    CHECK(trace.to_json(s.params).find("\"termination\"") != std::string::npos);
  }

  TEST_CASE("run stops at the regularity floor") {
    const Scenario s = make_scenario("triod-perturbed", {.intervals = 64});
    SchemeConfig c;
    c.t_final = 0.05;
    c.regularity_floor = 0.999; // the speed dips just below 1 near the junction
    const FlowTrace trace = run(s.network, c, s.params, s.flavor);
    CHECK(trace.termination == "regularity floor");
    CHECK(trace.final_state.time < c.t_final);
  }

  TEST_CASE("monitor reports junction diagnostics") {
    const Scenario s = make_scenario("theta-symmetric", {.intervals = 64});
    const MonitorReport r = monitor(s.network, s.params, Flavor::C0);
    CHECK(r.energy == doctest::Approx(network_energy(s.network, s.params)));
    CHECK(r.concurrency < 1e-12);
    CHECK(r.span > 0.5);
    CHECK(r.angle == 0.0);
  }
}
