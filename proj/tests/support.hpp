#pragma once

#include "elastinet/geometry.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace elastinet::testing {

inline std::vector<Vec2> sample(std::size_t intervals, const std::function<Vec2(double)>& f) {
  std::vector<Vec2> out(intervals + 1);
  for (std::size_t j = 0; j <= intervals; ++j) out[j] = f(static_cast<double>(j) / static_cast<double>(intervals));
  return out;
}

inline std::vector<double> sample_scalar(std::size_t intervals, const std::function<double(double)>& f) {
  std::vector<double> out(intervals + 1);
  for (std::size_t j = 0; j <= intervals; ++j) out[j] = f(static_cast<double>(j) / static_cast<double>(intervals));
  return out;
}

inline double relative_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace elastinet::testing
