#include "elastinet/cli.hpp"
#include "elastinet/errors.hpp"
#include "elastinet/flow.hpp"
#include "elastinet/linear.hpp"
#include "elastinet/scenario.hpp"
#include "elastinet/snapshot.hpp"
#include "elastinet/velocity.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace elastinet;
using std::numbers::pi;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double max_distance(const NetworkState& a, const NetworkState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < a.curve(i).size(); ++j)
      m = std::max(m, norm(a.curve(i).position()[j] - b.curve(i).position()[j]));
  return m;
}

Scenario scenario(const char* name, std::size_t n, std::uint64_t seed = 0) {
  ScenarioOptions o;
  o.intervals = n;
  o.seed = seed;
  return make_scenario(name, o);
}

// 1. Energy decreases along every accepted step.
Outcome energy_monotonicity() {
  Outcome out{true, ""};
  for (const auto& [name, t_final] : {std::pair{"theta-symmetric", 0.05}, std::pair{"triod-perturbed", 0.1}}) {
    const Scenario s = scenario(name, 128);
    SchemeConfig c;
    c.t_final = t_final;
    const FlowTrace trace = run(s.network, c, s.params, s.flavor);
    const double e0 = trace.records.front().energy;
    double worst = -1e300;
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
      const auto& r = trace.records[k];
      worst = std::max(worst, (r.energy - trace.records[k - 1].energy) / (r.dt * e0));
    }
    const bool ok = trace.termination == "t_final" && worst <= c.energy_tolerance;
    out.passed = out.passed && ok;
    out.detail += fmt("%s: %zu steps, E %.6g -> %.6g, max (dE/dt)/E0 = %.3g; ", name, trace.records.size() - 1, e0,
                      trace.records.back().energy, worst);
  }
  return out;
}

// 2. The straight Triod is a fixed point. Velocities of exactly straight data are pure
// rounding amplified by the fourth difference (~N⁴ε), so they are gated at N=32.
Outcome stationary_fidelity() {
  const Scenario coarse = scenario("triod-straight", 32);
  double velocity = 0.0;
  for (const auto& curve : coarse.network.curves()) {
    const VelocityField v = motion_rhs(curve, coarse.params);
    velocity = std::max({velocity, max_abs(v.A), max_abs(v.T)});
  }
  bool ok = velocity <= 1e-8;
  std::string detail = fmt("max |A|,|T| at N=32: %.3g; ", velocity);
  for (std::size_t n : {32u, 128u}) {
    const Scenario s = scenario("triod-straight", n);
    SchemeConfig c;
    c.t_final = 0.5;
    c.snapshot_every = 1;
    const FlowTrace trace = run(s.network, c, s.params, s.flavor);
    double displacement = 0.0;
    for (const auto& snap : trace.snapshots) displacement = std::max(displacement, max_distance(snap.net, s.network));
    ok = ok && trace.termination == "t_final" && displacement <= 1e-8;
    detail += fmt("N=%zu: sup displacement %.3g over %zu snapshots up to t=%.3g; ", n, displacement,
                  trace.snapshots.size(), trace.final_state.time);
  }
  return {ok, detail};
}

// Random perturbation that matches at the junctions (and vanishes at fixed ends).
Perturbation random_perturbation(std::mt19937_64& rng, Topology topology) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec2 c0{u(rng), u(rng)};
  const Vec2 c1{u(rng), u(rng)};
  Perturbation psi;
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec2 a{u(rng), u(rng)};
    const Vec2 b{u(rng), u(rng)};
    const double k = 1.0 + std::floor(3.0 * (u(rng) + 1.0) / 2.0);
    const bool theta = topology == Topology::Theta;
    psi[i] = [=](double x) {
      const Vec2 ends = theta ? (1.0 - x) * c0 + x * c1 : (1.0 - x) * c0;
      return ends + x * (1.0 - x) * a + std::sin(k * pi * x) * b;
    };
  }
  return psi;
}

// 3. First variation formula against the energy difference quotient.
Outcome first_variation() {
  Outcome out{true, ""};
  std::mt19937_64 rng(2024);
  for (const char* name : {"triod-perturbed", "theta-symmetric"}) {
    const Scenario s = scenario(name, 256);
    SchemeConfig c;
    c.t_final = 1e-5;
    c.dt_init = 1e-6;
    const NetworkState net = run(s.network, c, s.params, s.flavor).final_state.net;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const FirstVariation fv = first_variation_oracle(net, s.params, random_perturbation(rng, net.topology()));
      worst = std::max(worst, std::abs(fv.analytic - fv.numeric) / std::abs(fv.numeric));
    }
    out.passed = out.passed && worst <= 1e-4;
    out.detail += fmt("%s N=256 t=1e-5: max relative error %.3g over 10 perturbations; ", name, worst);
  }
  return out;
}

// 4. Geometric and parametric assemblies of the velocity agree.
Outcome velocity_identity() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng), w = 1.0 + 2.0 * std::abs(u(rng));
    const CurveSample curve(sample_curve(
        [=](double x) {
          return Vec2{x + a * x * x + c * std::sin(w * x), b * std::sin(2.0 * x) + d * std::cos(w * x)};
        },
        64));
    const EnergyParams params{std::abs(u(rng)) * 5.0};
    const VelocityField v = motion_rhs(curve, params);
    for (std::size_t j = 0; j < curve.size(); ++j) {
      const Vec2 parametric = -1.0 * parametric_velocity(curve.jet(j), params.mu);
      worst = std::max(worst, norm(v.rhs[j] - parametric) / norm(parametric));
    }
  }
  return {worst <= 1e-10, fmt("max node-wise relative difference %.3g on 20 random curves", worst)};
}

// 5. Lopatinskii-Shapiro verification.
Outcome lopatinskii_shapiro() {
  double admissible = 1e300;
  for (const char* name : {"theta-symmetric", "triod-straight", "triod-perturbed"}) {
    const Scenario s = scenario(name, 128);
    const LSReport r = ls_verify(s.network, s.flavor);
    if (!r.passed) admissible = 0.0;
    admissible = std::min(admissible, r.min_sigma);
  }
  const Scenario degenerate = scenario("theta-degenerate", 128);
  const double degenerate_sigma = ls_verify(degenerate.network, Flavor::C0).min_sigma;

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> re(1e-3, 1e3);
  std::uniform_real_distribution<double> im(-1e3, 1e3);
  std::size_t good = 0;
  for (int k = 0; k < 1000; ++k) {
    const SymbolRoots r = symbol_roots({re(rng), im(rng)}, 0.5 + re(rng) * 1e-3);
    int decaying = 0;
    for (std::size_t q = 0; q < 4; ++q) decaying += r.roots[q].real() < 0.0;
    good += decaying == 2 && r.decaying[0] + r.decaying[1] + r.decaying[2] + r.decaying[3] == 2;
  }
  const bool ok = admissible > 1e-6 && degenerate_sigma < 1e-10 && good == 1000;
  return {ok, fmt("(a) min sigma over admissible networks %.3g, (b) degenerate Theta sigma %.3g, "
                  "(c) %zu/1000 random lambda with two decaying roots",
                  admissible, degenerate_sigma, good)};
}

// 6. Imposed rows hold along the trace; nonlinear residuals shrink under refinement.
Outcome boundary_exactness() {
  Outcome out{true, ""};
  for (const auto& [name, t_final] : {std::pair{"theta-symmetric", 0.005}, std::pair{"triod-perturbed", 0.01}}) {
    std::vector<double> curvature, third, curvature_floor, third_floor;
    double linear = 0.0;
    for (int level = 0; level < 3; ++level) {
      const Scenario s = scenario(name, 64u << level);
      SchemeConfig c;
      c.t_final = t_final;
      c.dt_init = 2e-4 / (1 << level);
      const FlowTrace trace = run(s.network, c, s.params, s.flavor);
      linear = std::max(linear, trace.max_linear_residual);
      const MonitorReport r = monitor(trace.final_state.net, s.params, s.flavor);
      curvature.push_back(r.curvature);
      third.push_back(r.third);
      curvature_floor.push_back(rounding_floor(trace.final_state.net, 2));
      third_floor.push_back(rounding_floor(trace.final_state.net, 3));
    }
    // A residual passes when it shrinks by 3 or already sits at its rounding floor.
    auto shrinks = [](const std::vector<double>& v, const std::vector<double>& floor) {
      for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const bool at_floor = v[k] <= floor[k] && v[k + 1] <= floor[k + 1];
        if (!at_floor && v[k] < 3.0 * v[k + 1]) return false;
      }
      return true;
    };
    const bool ok = linear <= 1e-8 && shrinks(curvature, curvature_floor) && shrinks(third, third_floor);
    out.passed = out.passed && ok;
    out.detail += fmt("%s t=%g: linear rows max %.2g; curvature %.2g %.2g %.2g (floor %.2g); "
                      "third %.2g %.2g %.2g (floor %.2g); ",
                      name, t_final, linear, curvature[0], curvature[1], curvature[2], curvature_floor[2], third[0],
                      third[1], third[2], third_floor[2]);
  }
  return out;
}

// 7. Self-convergence of the perturbed Triod.
Outcome self_convergence() {
  std::vector<NetworkState> solutions;
  std::size_t rejected = 0;
  for (std::size_t n : {64u, 128u, 256u}) {
    const Scenario s = scenario("triod-perturbed", n);
    SchemeConfig c;
    c.t_final = 0.1;
    c.dt_init = 1e-4;
    const FlowTrace trace = run(s.network, c, s.params, s.flavor);
    rejected += trace.rejected_steps;
    solutions.push_back(trace.final_state.net);
  }
  std::vector<double> diff;
  for (std::size_t k = 0; k + 1 < solutions.size(); ++k) {
    double m = 0.0;
    const NetworkState& coarse = solutions[k];
    const NetworkState& fine = solutions[k + 1];
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < coarse.curve(i).size(); ++j)
        m = std::max(m, norm(coarse.curve(i).position()[j] - fine.curve(i).position()[2 * j]));
    diff.push_back(m);
  }
  const double order = std::log2(diff[0] / diff[1]);
  return {order >= 1.7, fmt("sup differences %.3g (64/128), %.3g (128/256) at t=0.1, dt=1e-4: observed order %.3f "
                            "(%zu rejected steps)",
                            diff[0], diff[1], order, rejected)};
}

// 8. Reparametrization of twisted Thetas.
Outcome reparametrization() {
  Outcome out{true, ""};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = scenario("theta-twisted", 128, seed);
    const bool geometric = geometric_admissibility(s.network, s.params, Flavor::C0, kGridTolerance).passed();
    const AdmissibilityReport before = parametric_admissibility(s.network, s.params, Flavor::C0);
    const double tangential = std::max(before.value("x0.tangential_second"), before.value("x1.tangential_second"));
    const ReparamMap map = build_reparametrization(s.network, s.params);
    const NetworkState net = apply_reparametrization(s.network, map);
    const bool after = parametric_admissibility(net, s.params, Flavor::C0).passed();
    double hausdorff = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      hausdorff = std::max(hausdorff, hausdorff_distance(densify(s.network.curve(i).position(), 16),
                                                         densify(net.curve(i).position(), 16)));
    }
    const double h = 1.0 / 128.0;
    const bool ok = geometric && tangential > 1e-3 && after && map.min_derivative() > 0.0 && hausdorff <= 10 * h * h;
    out.passed = out.passed && ok;
    out.detail += fmt("seed %llu: tangential %.2g, min theta_x %.3f, hausdorff %.2g; ",
                      static_cast<unsigned long long>(seed), tangential, map.min_derivative(), hausdorff);
  }
  out.detail += fmt("bound 10h^2 = %.2g", 10.0 / (128.0 * 128.0));
  return out;
}

// 9. Rigid motions commute with the step; mirror symmetry persists.
Outcome equivariance() {
  const RigidMotion motion{0.9, {0.4, -1.3}, true};
  double commute = 0.0;
  for (const char* name : {"triod-perturbed", "theta-symmetric"}) {
    const Scenario s = scenario(name, 128);
    FlowState a = initial_state(s.network, s.params);
    FlowState b = initial_state(s.network.transformed(motion), s.params);
    for (int k = 0; k < 10; ++k) {
      a = step(a, 1e-4, s.params, s.flavor);
      b = step(b, 1e-4, s.params, s.flavor);
    }
    commute = std::max(commute, max_distance(a.net.transformed(motion), b.net));
  }

  const Scenario s = scenario("theta-symmetric", 128);
  FlowState state = initial_state(s.network, s.params);
  const RigidMotion flip{pi, {}, true}; // reflection across the y-axis
  double asymmetry = 0.0;
  for (int k = 0; k < 100; ++k) {
    state = step(state, 1e-4, s.params, s.flavor);
    const NetworkState& net = state.net;
    for (std::size_t j = 0; j < net.curve(0).size(); ++j) {
      asymmetry = std::max({asymmetry, norm(flip.apply(net.curve(0).position()[j]) - net.curve(2).position()[j]),
                            norm(flip.apply(net.curve(1).position()[j]) - net.curve(1).position()[j])});
    }
  }
  return {commute <= 1e-8 && asymmetry <= 1e-8,
          fmt("max deviation after 10 steps under rotation+reflection+translation %.3g; mirror asymmetry over 100 "
              "steps %.3g",
              commute, asymmetry)};
}

// 10. Repeated CLI runs produce identical files.
Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / "elastinet_acceptance";
  std::filesystem::remove_all(root);
  auto run_twice = [&](const std::string& tag, std::vector<std::string> args, bool out_is_dir) {
    std::vector<std::string> texts;
    for (const char* copy : {"a", "b"}) {
      const auto dir = root / copy / tag;
      std::filesystem::create_directories(dir);
      std::vector<std::string> full = {"elastinet"};
      full.insert(full.end(), args.begin(), args.end());
      full.push_back("--out");
      full.push_back(out_is_dir ? dir.string() : (dir / "out.txt").string());
      std::vector<const char*> argv;
      for (const auto& a : full) argv.push_back(a.c_str());
      std::ostringstream out, err;
      const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
      std::string text = std::to_string(code) + out.str() + err.str();
      for (const auto& entry : std::filesystem::directory_iterator(dir))
        text += entry.path().filename().string() + read_text_file(entry.path());
      texts.push_back(text);
    }
    return texts[0] == texts[1] && texts[0].size() > 1;
  };
  std::size_t same = 0, total = 0;
  auto count = [&](bool ok) { same += ok; ++total; };
  count(run_twice("scenario", {"scenario", "theta-twisted", "--seed", "4", "--grid", "128"}, false));
  count(run_twice("check", {"check", "theta-symmetric", "--grid", "128"}, false));
  count(run_twice("ls", {"ls", "triod-perturbed", "--grid", "128"}, false));
  count(run_twice("reparam", {"reparam", "theta-twisted", "--seed", "4", "--grid", "128"}, false));
  count(run_twice("simulate", {"simulate", "triod-perturbed", "--grid", "64", "--t-final", "0.01",
                               "--snapshot-every", "20"},
                  true));
  std::filesystem::remove_all(root);
  return {same == total, fmt("%zu/%zu commands byte-identical across two runs", same, total)};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"energy monotonicity", energy_monotonicity},
      {"stationary fidelity", stationary_fidelity},
      {"first variation", first_variation},
      {"velocity identity", velocity_identity},
      {"Lopatinskii-Shapiro", lopatinskii_shapiro},
      {"boundary exactness", boundary_exactness},
      {"self-convergence", self_convergence},
      {"reparametrization", reparametrization},
      {"equivariance", equivariance},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.passed;
    std::printf("criterion %2zu %s  %s: %s [%.1fs]\n", k + 1, o.passed ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
