#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace elastinet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  constexpr Vec2& operator/=(double s) { x /= s; y /= s; return *this; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator/(Vec2 a, double s) { return a /= s; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the planar cross product.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
/// Anticlockwise rotation by π/2.
constexpr Vec2 rotate_left(const Vec2& a) { return {-a.y, a.x}; }

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Vec2& v) { return norm(v); }

/// Values of a function on the uniform grid x_j = j/N, j = 0..N.
template <typename T>
class GridFunction {
public:
  GridFunction() = default;
  explicit GridFunction(std::vector<T> values) : values_(std::move(values)) {}
  GridFunction(std::size_t nodes, const T& fill) : values_(nodes, fill) {}

  /// Number of intervals N (node count minus one).
  std::size_t intervals() const { return values_.empty() ? 0 : values_.size() - 1; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return 1.0 / static_cast<double>(intervals()); }
  double node(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(intervals()); }

  const T& operator[](std::size_t j) const { return values_[j]; }
  T& operator[](std::size_t j) { return values_[j]; }
  const T& front() const { return values_.front(); }
  const T& back() const { return values_.back(); }

  std::span<const T> values() const { return values_; }
  const std::vector<T>& data() const { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool all_finite() const;

private:
  std::vector<T> values_;
};

using ScalarGrid = GridFunction<double>;
using CurveGrid = GridFunction<Vec2>;

inline constexpr std::size_t kMinIntervals = 16;

/// Weights of the finite-difference approximation of the `order`-th derivative at
/// offset 0 from samples at the given (integer) offsets, for unit spacing.
std::vector<double> stencil_weights(std::span<const int> offsets, int order);

/// Stencil used by `finite_difference` at node j: offsets relative to j and weights
/// already divided by h^order. Centered where it fits, one-sided otherwise; both
/// have second-order accuracy.
struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;
};
Stencil derivative_stencil(std::size_t intervals, std::size_t node, int order);

/// Derivative of order 1..4 of a grid function; throws GridError when N < 2*order+4
/// or N < kMinIntervals.
ScalarGrid finite_difference(const ScalarGrid& g, int order);
CurveGrid finite_difference(const CurveGrid& g, int order);

/// Single-node evaluation of the same operator.
double finite_difference_at(std::span<const double> values, std::size_t node, int order);
Vec2 finite_difference_at(std::span<const Vec2> values, std::size_t node, int order);

/// Composite trapezoid rule over [0,1].
double trapezoid(std::span<const double> values);

double max_abs(const ScalarGrid& g);
double max_norm(const CurveGrid& g);

} // namespace elastinet
