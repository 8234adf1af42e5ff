#pragma once

#include "elastinet/network.hpp"

#include <string>

namespace elastinet {

struct SvgStyle {
  int width = 480;
  int height = 480;
  double margin = 0.08; // fraction of the view box
};

/// Axis-aligned box in model coordinates.
struct ViewBox {
  Vec2 lo;
  Vec2 hi;
};

/// Smallest square box around all nodes (and Triod endpoints), padded by the style margin.
ViewBox view_box(const NetworkState& net, const SvgStyle& style = {});
ViewBox merge(const ViewBox& a, const ViewBox& b);

/// Polylines of the three curves plus junction and endpoint markers; y points up.
std::string render_svg(const NetworkState& net, const ViewBox& box, const SvgStyle& style = {},
                       const std::string& caption = "");

} // namespace elastinet
