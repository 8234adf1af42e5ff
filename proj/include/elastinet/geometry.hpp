#pragma once

#include "elastinet/grid.hpp"

#include <array>
#include <span>
#include <vector>

namespace elastinet {

inline constexpr double kDefaultRegularityFloor = 1e-6;

/// Length-penalty weight μ of the elastic energy. Any finite real is allowed.
struct EnergyParams {
  double mu = 1.0;
};

/// Parametric derivatives γ_x..γ_xxxx at one node.
struct Jet {
  Vec2 d1, d2, d3, d4;
};

/// Geometric quantities at one node, obtained from a Jet by the chain rule.
struct LocalFrame {
  double speed = 0.0; // |γ_x|
  Vec2 tau;           // γ_x / |γ_x|
  Vec2 nu;            // τ rotated by +π/2
  double k = 0.0;     // ⟨γ_xx, ν⟩ / |γ_x|², so that τ_s = k ν
  double k_s = 0.0;
  double k_ss = 0.0;
};

/// Throws RegularityError when |γ_x| < floor.
LocalFrame local_frame(const Jet& jet, double regularity_floor = kDefaultRegularityFloor);

/// A planar curve sampled on the uniform grid of [0,1] together with its
/// finite-difference derivatives of orders 1..4 and its speed.
class CurveSample {
public:
  CurveSample() = default;
  explicit CurveSample(CurveGrid position);
  explicit CurveSample(std::vector<Vec2> position) : CurveSample(CurveGrid(std::move(position))) {}

  const CurveGrid& position() const { return position_; }
  /// order in 1..4
  const CurveGrid& derivative(int order) const { return derivatives_[static_cast<std::size_t>(order - 1)]; }
  const ScalarGrid& speed() const { return speed_; }

  std::size_t intervals() const { return position_.intervals(); }
  std::size_t size() const { return position_.size(); }
  double spacing() const { return position_.spacing(); }

  Jet jet(std::size_t node) const;
  double min_speed() const;
  bool is_regular(double floor = kDefaultRegularityFloor) const { return min_speed() >= floor; }
  /// Throws RegularityError unless min speed ≥ floor.
  void require_regular(double floor = kDefaultRegularityFloor) const;

private:
  CurveGrid position_;
  std::array<CurveGrid, 4> derivatives_;
  ScalarGrid speed_;
};

struct Frame {
  CurveGrid tau;
  CurveGrid nu;
  ScalarGrid k;
  ScalarGrid k_s;
  ScalarGrid k_ss;
};

Frame frame(const CurveSample& curve, double regularity_floor = kDefaultRegularityFloor);

/// ∫₀¹ (k² + μ)|γ_x| dx by the composite trapezoid rule.
double elastic_energy(const CurveSample& curve, const EnergyParams& params,
                      double regularity_floor = kDefaultRegularityFloor);

double length(const CurveSample& curve);

enum class HolderDirection { Time, Space };

/// A scalar field u(t_m, x_j) sampled on time slices (rows) over a common grid on [0,1].
struct SampledField {
  std::vector<double> times;
  std::vector<std::vector<double>> slices;
};

/// Discrete Hölder seminorm: sup over sample pairs of |u(a)-u(b)| / |a-b|^ρ taken
/// along the chosen direction. Diagnostic only.
double holder_seminorm(const SampledField& field, double rho, HolderDirection direction);

} // namespace elastinet
