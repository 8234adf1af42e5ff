#pragma once

#include "elastinet/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elastinet {

/// Theta: the three curves share both endpoints. Triod: they share x=0, and curve i
/// ends at the fixed point P^i at x=1.
enum class Topology { Theta, Triod };

/// C0: concurrency only at the junctions. C1: concurrency plus 120° angles.
enum class Flavor { C0, C1 };

/// Curve end: x=0 or x=1.
enum class End { Start = 0, Finish = 1 };

std::string_view to_string(Topology t);
std::string_view to_string(Flavor f);
Topology parse_topology(std::string_view s);
Flavor parse_flavor(std::string_view s);
/// The flavor each topology is evolved with (Theta ↔ C0, Triod ↔ C1).
Flavor natural_flavor(Topology t);

inline std::size_t node_of(End e, std::size_t intervals) { return e == End::Start ? 0 : intervals; }

/// Rotation by `angle`, optional reflection across the x-axis applied first, then translation.
struct RigidMotion {
  double angle = 0.0;
  Vec2 translation{};
  bool reflect = false;

  Vec2 apply(const Vec2& p) const;
  Vec2 apply_linear(const Vec2& v) const;
};

class NetworkState {
public:
  NetworkState() = default;
  /// For Triods without explicit endpoints, P^i defaults to γ^i(1).
  NetworkState(Topology topology, std::array<CurveSample, 3> curves,
               std::optional<std::array<Vec2, 3>> endpoints = std::nullopt);

  static NetworkState from_positions(Topology topology, const std::array<std::vector<Vec2>, 3>& positions,
                                     std::optional<std::array<Vec2, 3>> endpoints = std::nullopt);

  Topology topology() const { return topology_; }
  const std::array<CurveSample, 3>& curves() const { return curves_; }
  const CurveSample& curve(std::size_t i) const { return curves_[i]; }
  /// Fixed endpoints P^i; empty for Theta networks.
  const std::optional<std::array<Vec2, 3>>& endpoints() const { return endpoints_; }
  std::size_t intervals() const { return curves_[0].intervals(); }

  double min_speed() const;
  NetworkState transformed(const RigidMotion& motion) const;
  /// Returns a copy whose curve positions are replaced; topology and endpoints are kept.
  NetworkState with_positions(const std::array<std::vector<Vec2>, 3>& positions) const;

  /// Ends at which the three curves meet.
  std::vector<End> junction_ends() const;

private:
  Topology topology_ = Topology::Theta;
  std::array<CurveSample, 3> curves_;
  std::optional<std::array<Vec2, 3>> endpoints_;
};

double network_energy(const NetworkState& net, const EnergyParams& params,
                      double regularity_floor = kDefaultRegularityFloor);
double network_length(const NetworkState& net);

/// Angles at a junction: alpha3 between τ¹,τ²; alpha1 between τ²,τ³; alpha2 between τ³,τ¹.
struct JunctionAngles {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
};

JunctionAngles junction_angles(const NetworkState& net, End end);

enum class Bound {
  Upper, // passes when value ≤ tolerance
  Lower, // passes when value > tolerance
};

struct ResidualEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::Upper;

  bool passed() const;
};

/// Named residuals of junction and endpoint conditions.
class AdmissibilityReport {
public:
  explicit AdmissibilityReport(double tolerance = 1e-8) : tolerance_(tolerance) {}

  void add(std::string name, double value, Bound bound = Bound::Upper);
  void add(std::string name, double value, Bound bound, double tolerance);
  void merge(const AdmissibilityReport& other);

  double tolerance() const { return tolerance_; }
  const std::vector<ResidualEntry>& entries() const { return entries_; }
  bool passed() const;
  bool contains(std::string_view name) const;
  /// Throws std::out_of_range when absent.
  double value(std::string_view name) const;
  const ResidualEntry& entry(std::string_view name) const;
  std::vector<std::string> failures() const;
  /// Largest value among entries whose name ends with `suffix` (Upper bounds only).
  double max_with_suffix(std::string_view suffix) const;

  std::string to_text() const;

private:
  double tolerance_;
  std::vector<ResidualEntry> entries_;
};

inline constexpr double kAnalyticTolerance = 1e-8;
inline constexpr double kGridTolerance = 1e-6;

/// Natural boundary residuals of the C⁰ Theta flow at both junctions.
AdmissibilityReport junction_residuals_c0(const NetworkState& net, const EnergyParams& params,
                                          double tolerance = kAnalyticTolerance);

/// Junction (x=0) and Navier endpoint (x=1) residuals of the C¹ Triod flow.
AdmissibilityReport junction_residuals_c1(const NetworkState& net, const EnergyParams& params,
                                          double tolerance = kAnalyticTolerance);

/// Smallest singular value of the 2×3 matrix of junction normals.
double normal_span_measure(const NetworkState& net, End end);

AdmissibilityReport geometric_admissibility(const NetworkState& net, const EnergyParams& params, Flavor flavor,
                                            double tolerance = kAnalyticTolerance);

/// max over junctions and pairs of |A^iν^i + T^iτ^i − (A^jν^j + T^jτ^j)|.
double compatibility_residual(const NetworkState& net, const EnergyParams& params);

/// Floating-point resolution of a junction residual built from derivatives up to
/// `order`: one-sided stencils amplify coordinate rounding by Σ|w| ~ h^-order.
/// Geometric quantities are further divided by |γ_x|^order.
double rounding_floor(const NetworkState& net, int order, bool geometric = true);

/// Floating-point resolution of the compatibility residual: the fourth difference
/// amplifies coordinate rounding by ~h⁻⁴.
double compatibility_rounding_floor(const NetworkState& net);

AdmissibilityReport parametric_admissibility(const NetworkState& net, const EnergyParams& params, Flavor flavor,
                                             double tolerance = kGridTolerance);

/// Endpoint Taylor data of a reparametrization map θ.
struct TaylorData {
  double value = 0.0;
  double d1 = 1.0;
  double d2 = 0.0;
  double d3 = 1.0;
  double d4 = 0.0;
};

/// Smooth increasing maps θ^i of [0,1] onto itself.
struct ReparamMap {
  std::array<ScalarGrid, 3> theta;
  std::array<std::array<TaylorData, 2>, 3> taylor; // [curve][end]
  double blend_radius = 0.25;

  double min_derivative() const;
};

/// Builds θ^i so that σ^i∘θ^i satisfies the second-order and compatibility conditions
/// at the junctions (and the second-order condition at Triod endpoints).
/// Throws AdmissibilityError when the geometry is not admissible or blending fails.
ReparamMap build_reparametrization(const NetworkState& net, const EnergyParams& params);

/// Composes each sampled curve with θ^i (curves are evaluated by local degree-7
/// Lagrange interpolation of the samples).
NetworkState apply_reparametrization(const NetworkState& net, const ReparamMap& map);

/// Symmetric Hausdorff distance between the polylines through two sample sets.
double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b);

/// Points of the degree-7 interpolant at `factor`·N + 1 equally spaced parameters.
std::vector<Vec2> densify(const CurveGrid& samples, std::size_t factor);

/// Evaluates the sampled curve at parameter u ∈ [0,1] by local Lagrange interpolation.
Vec2 interpolate(const CurveGrid& samples, double u, int degree = 7);

} // namespace elastinet
