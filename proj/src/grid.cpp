#include "elastinet/grid.hpp"

#include "elastinet/errors.hpp"

#include <algorithm>
#include <string>

namespace elastinet {

template <typename T>
bool GridFunction<T>::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const T& v) {
    if constexpr (std::is_same_v<T, Vec2>) {
      return std::isfinite(v.x) && std::isfinite(v.y);
    } else {
      return std::isfinite(v);
    }
  });
}

template class GridFunction<double>;
template class GridFunction<Vec2>;

// Fornberg's recursion for weights on arbitrary nodes, evaluated at 0.
std::vector<double> stencil_weights(std::span<const int> offsets, int order) {
  const int n = static_cast<int>(offsets.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(order + 1), 0.0));
  double c1 = 1.0;
  double c4 = offsets[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = offsets[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) {
      const double c3 = static_cast<double>(offsets[static_cast<std::size_t>(i)] - offsets[static_cast<std::size_t>(j)]);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[i][order];
  return w;
}

namespace {

void check_grid(std::size_t intervals, int order) {
  if (order < 1 || order > 4) {
    throw GridError("finite_difference: order must be in 1..4, got " + std::to_string(order));
  }
  const auto needed = std::max<std::size_t>(kMinIntervals, static_cast<std::size_t>(2 * order + 4));
  if (intervals < needed) {
    throw GridError("finite_difference: grid with N=" + std::to_string(intervals) +
                    " is too small for order " + std::to_string(order) + " (need N >= " +
                    std::to_string(needed) + ")");
  }
}

} // namespace

Stencil derivative_stencil(std::size_t intervals, std::size_t node, int order) {
  check_grid(intervals, order);
  const int n = static_cast<int>(intervals);
  const int j = static_cast<int>(node);
  const int half = (order + 1) / 2;
  Stencil s;
  if (j - half >= 0 && j + half <= n) {
    for (int o = -half; o <= half; ++o) s.offsets.push_back(o);
  } else {
    const int width = order + 2;
    const int start = (j - half < 0) ? 0 : n - width + 1;
    for (int o = 0; o < width; ++o) s.offsets.push_back(start + o - j);
  }
  s.weights = stencil_weights(s.offsets, order);
  const double h = 1.0 / static_cast<double>(n);
  const double scale = std::pow(h, -order);
  for (auto& w : s.weights) w *= scale;
  return s;
}

namespace {

template <typename T>
GridFunction<T> apply_fd(const GridFunction<T>& g, int order) {
  const std::size_t n = g.intervals();
  check_grid(n, order);
  // Interior nodes share one stencil; only the few boundary nodes differ.
  const Stencil interior = derivative_stencil(n, n / 2, order);
  const int half = (order + 1) / 2;
  std::vector<T> out(g.size());
  for (std::size_t j = 0; j <= n; ++j) {
    const bool inner = static_cast<int>(j) - half >= 0 && static_cast<int>(j) + half <= static_cast<int>(n);
    const Stencil boundary = inner ? Stencil{} : derivative_stencil(n, j, order);
    const Stencil& s = inner ? interior : boundary;
    T acc{};
    for (std::size_t k = 0; k < s.offsets.size(); ++k) {
      acc += g[static_cast<std::size_t>(static_cast<int>(j) + s.offsets[k])] * s.weights[k];
    }
    out[j] = acc;
  }
  return GridFunction<T>(std::move(out));
}

template <typename T>
T apply_fd_at(std::span<const T> values, std::size_t node, int order) {
  const Stencil s = derivative_stencil(values.size() - 1, node, order);
  T acc{};
  for (std::size_t k = 0; k < s.offsets.size(); ++k) {
    acc += values[static_cast<std::size_t>(static_cast<int>(node) + s.offsets[k])] * s.weights[k];
  }
  return acc;
}

} // namespace

ScalarGrid finite_difference(const ScalarGrid& g, int order) { return apply_fd(g, order); }
CurveGrid finite_difference(const CurveGrid& g, int order) { return apply_fd(g, order); }

double finite_difference_at(std::span<const double> values, std::size_t node, int order) {
  return apply_fd_at(values, node, order);
}
Vec2 finite_difference_at(std::span<const Vec2> values, std::size_t node, int order) {
  return apply_fd_at(values, node, order);
}

double trapezoid(std::span<const double> values) {
  if (values.size() < 2) throw GridError("trapezoid: need at least two nodes");
  const double h = 1.0 / static_cast<double>(values.size() - 1);
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t j = 1; j + 1 < values.size(); ++j) sum += values[j];
  return sum * h;
}

double max_abs(const ScalarGrid& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

double max_norm(const CurveGrid& g) {
  double m = 0.0;
  for (const auto& v : g) m = std::max(m, norm(v));
  return m;
}

} // namespace elastinet
