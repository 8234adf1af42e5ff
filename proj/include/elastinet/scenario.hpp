#pragma once

#include "elastinet/network.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elastinet {

/// Parametrized curve on [0,1].
using CurveFunction = std::function<Vec2(double)>;

struct ScenarioOptions {
  std::size_t intervals = 128;
  std::optional<double> mu;        // scenario default when empty
  std::optional<double> amplitude; // bump height / twist strength
  std::uint64_t seed = 0;
};

struct Scenario {
  std::string name;
  EnergyParams params;
  Flavor flavor = Flavor::C0;
  NetworkState network;
  std::array<CurveFunction, 3> curves; // exact parametrizations that were sampled
};

/// Built-ins: triod-straight, triod-perturbed, theta-symmetric, theta-degenerate,
/// theta-twisted (seeded random rigid motion and tangential twist).
std::vector<std::string> scenario_names();
bool is_scenario(std::string_view name);

/// Throws Error for unknown names and GridError for grids that are too coarse.
Scenario make_scenario(std::string_view name, const ScenarioOptions& options = {});

/// Samples f at the N+1 grid nodes.
std::vector<Vec2> sample_curve(const CurveFunction& f, std::size_t intervals);

/// exp(1 − 1/(1 − u²)) on |u| < 1, zero elsewhere; equals 1 at u = 0.
double bump(double u);
/// (1 − u²)⁸ on |u| < 1, zero elsewhere; C⁷ with moderate derivatives.
double polynomial_bump(double u);
/// C∞ step ψ(t)/(ψ(t) + ψ(1 − t)) with ψ(t) = exp(−sharpness/t): 0 for t ≤ 0, 1 for t ≥ 1.
double smooth_step(double t, double sharpness = 1.0);

} // namespace elastinet
