#include "elastinet/scenario.hpp"

#include "elastinet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <memory>
#include <random>

namespace elastinet {

double bump(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double polynomial_bump(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::pow(1.0 - u * u, 8);
}

double smooth_step(double t, double sharpness) {
  auto psi = [&](double s) { return s > 0.0 ? std::exp(-sharpness / s) : 0.0; };
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return psi(t) / (psi(t) + psi(1.0 - t));
}

std::vector<Vec2> sample_curve(const CurveFunction& f, std::size_t intervals) {
  std::vector<Vec2> out(intervals + 1);
  for (std::size_t j = 0; j <= intervals; ++j) out[j] = f(static_cast<double>(j) / static_cast<double>(intervals));
  return out;
}

namespace {

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

std::array<Vec2, 3> triod_endpoints() {
  constexpr double third = 2.0 * std::numbers::pi / 3.0;
  return {unit(0.0), unit(third), unit(2.0 * third)};
}

// Gauss-Legendre nodes and weights on [0,1], 10 points.
constexpr std::array<double, 10> kGaussNodes = {
    0.013046735741414128, 0.067468316655507732, 0.16029521585048778, 0.28330230293537639, 0.42556283050918442,
    0.57443716949081558, 0.71669769706462361, 0.83970478414951222, 0.93253168334449227, 0.98695326425858587};
constexpr std::array<double, 10> kGaussWeights = {
    0.033335672154344069, 0.074725674575290296, 0.10954318125799102, 0.13463335965499818, 0.14776211235737644,
    0.14776211235737644, 0.13463335965499818, 0.10954318125799102, 0.074725674575290296, 0.033335672154344069};

// Constant-speed curve x ↦ start + ℓ∫₀ˣ (cos θ, sin θ) with turning angle
// θ = θ₀ + Δθ·S((x − a)/(1 − 2a)); straight on [0, a] and [1 − a, 1].
class TurningCurve {
public:
  TurningCurve(Vec2 start, double theta0, double turn, double flat) : start_(start), theta0_(theta0), turn_(turn), flat_(flat) {
    cumulative_.resize(kPanels + 1);
    for (std::size_t k = 0; k < kPanels; ++k) {
      cumulative_[k + 1] = cumulative_[k] + panel(static_cast<double>(k) / kPanels, static_cast<double>(k + 1) / kPanels);
    }
  }

  double angle(double x) const {
    return theta0_ + turn_ * smooth_step((x - flat_) / (1.0 - 2.0 * flat_), kSharpness);
  }

  /// ∫₀ˣ (cos θ, sin θ).
  Vec2 integral(double x) const {
    const auto k = std::min(kPanels - 1, static_cast<std::size_t>(std::floor(x * kPanels)));
    return cumulative_[k] + panel(static_cast<double>(k) / kPanels, x);
  }

private:
  static constexpr std::size_t kPanels = 2048;
  static constexpr double kSharpness = 0.2;

  Vec2 panel(double a, double b) const {
    Vec2 sum{};
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
      const double t = angle(a + (b - a) * kGaussNodes[q]);
      sum += kGaussWeights[q] * Vec2{std::cos(t), std::sin(t)};
    }
    return (b - a) * sum;
  }

  Vec2 start_;
  double theta0_;
  double turn_;
  double flat_;
  std::vector<Vec2> cumulative_;
};

// Theta through (0,∓1) whose outer arcs leave and enter the junctions at 120° to the
// straight middle curve; the arcs have constant speed and are straight near the ends.
std::array<CurveFunction, 3> theta_curves() {
  const Vec2 o1{0.0, -1.0};
  const Vec2 o2{0.0, 1.0};
  constexpr double kFlat = 0.1;
  const auto arc = std::make_shared<TurningCurve>(o1, -std::numbers::pi / 6.0, 4.0 * std::numbers::pi / 3.0, kFlat);
  const Vec2 total = arc->integral(1.0);
  const double speed = (o2.y - o1.y) / total.y;
  // Remove the closing error of the quadrature with a correction that is constant near each end.
  const Vec2 miss = o1 + speed * total - o2;
  CurveFunction right = [=](double x) {
    return o1 + speed * arc->integral(x) - smooth_step((x - kFlat) / (1.0 - 2.0 * kFlat)) * miss;
  };
  CurveFunction middle = [=](double x) { return o1 + x * (o2 - o1); };
  CurveFunction left = [=](double x) {
    const Vec2 p = right(x);
    return Vec2{-p.x, p.y};
  };
  return {right, middle, left};
}

Scenario finish(std::string name, EnergyParams params, Topology topology, std::array<CurveFunction, 3> curves,
                std::size_t intervals, std::optional<std::array<Vec2, 3>> endpoints = std::nullopt) {
  std::array<std::vector<Vec2>, 3> pos;
  for (std::size_t i = 0; i < 3; ++i) pos[i] = sample_curve(curves[i], intervals);
  if (topology == Topology::Triod) {
    for (std::size_t i = 0; i < 3; ++i) pos[i].back() = (*endpoints)[i];
  }
  Scenario s;
  s.name = std::move(name);
  s.params = params;
  s.flavor = natural_flavor(topology);
  s.network = NetworkState::from_positions(topology, pos, endpoints);
  s.curves = std::move(curves);
  return s;
}

} // namespace

std::vector<std::string> scenario_names() {
  return {"triod-straight", "triod-perturbed", "theta-symmetric", "theta-degenerate", "theta-twisted"};
}

bool is_scenario(std::string_view name) {
  const auto names = scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Scenario make_scenario(std::string_view name, const ScenarioOptions& options) {
  const std::size_t n = options.intervals;
  if (n < kMinIntervals) throw GridError("scenario: need at least " + std::to_string(kMinIntervals) + " intervals");

  if (name == "triod-straight" || name == "triod-perturbed") {
    const bool perturbed = name == "triod-perturbed";
    const EnergyParams params{options.mu.value_or(perturbed ? 0.2 : 1.0)};
    const double a = perturbed ? options.amplitude.value_or(0.05) : 0.0;
    const auto ends = triod_endpoints();
    std::array<CurveFunction, 3> curves;
    for (std::size_t i = 0; i < 3; ++i) {
      const Vec2 p = ends[i];
      const double height = i == 0 ? a : 0.0;
      curves[i] = [=](double x) { return x * p + height * polynomial_bump((x - 0.5) / 0.35) * rotate_left(p); };
    }
    return finish(std::string(name), params, Topology::Triod, curves, n, ends);
  }

  if (name == "theta-symmetric") {
    return finish("theta-symmetric", EnergyParams{options.mu.value_or(1.0)}, Topology::Theta, theta_curves(), n);
  }

  if (name == "theta-degenerate") {
    const double a = options.amplitude.value_or(0.5);
    std::array<CurveFunction, 3> curves = {
        [=](double x) { return Vec2{-1.0 + 2.0 * x, a * bump((x - 0.5) / 0.3)}; },
        [](double x) { return Vec2{-1.0 + 2.0 * x, 0.0}; },
        [=](double x) { return Vec2{-1.0 + 2.0 * x, -a * bump((x - 0.5) / 0.3)}; },
    };
    return finish("theta-degenerate", EnergyParams{options.mu.value_or(1.0)}, Topology::Theta, curves, n);
  }

  if (name == "theta-twisted") {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double twist = options.amplitude.value_or(0.3);
    const RigidMotion motion{2.0 * std::numbers::pi * uni(rng), {2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0}, false};
    const auto base = theta_curves();
    std::array<CurveFunction, 3> curves;
    for (std::size_t i = 0; i < 3; ++i) {
      // η(x) = x + c x(1 − x) keeps the image and gives η''(0) = −2c.
      const double c = twist * (0.5 + 0.5 * uni(rng)) * (uni(rng) < 0.5 ? -1.0 : 1.0);
      const CurveFunction f = base[i];
      curves[i] = [=](double x) { return motion.apply(f(x + c * x * (1.0 - x))); };
    }
    return finish("theta-twisted", EnergyParams{options.mu.value_or(1.0)}, Topology::Theta, curves, n);
  }

  throw Error("unknown scenario '" + std::string(name) + "'");
}

} // namespace elastinet
