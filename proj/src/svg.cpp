#include "elastinet/svg.hpp"


#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

namespace elastinet {

namespace {

constexpr std::array<const char*, 3> kColors = {"#1f77b4", "#d62728", "#2ca02c"};

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

} // namespace

ViewBox view_box(const NetworkState& net, const SvgStyle& style) {
  Vec2 lo{1e300, 1e300};
  Vec2 hi{-1e300, -1e300};
  auto include = [&](const Vec2& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  };
  for (const auto& c : net.curves()) {
    for (const auto& p : c.position()) include(p);
  }
  if (net.endpoints()) {
    for (const auto& p : *net.endpoints()) include(p);
  }
  const Vec2 centre = 0.5 * (lo + hi);
  const double half = 0.5 * std::max({hi.x - lo.x, hi.y - lo.y, 1e-9}) * (1.0 + 2.0 * style.margin);
  return {centre - Vec2{half, half}, centre + Vec2{half, half}};
}

ViewBox merge(const ViewBox& a, const ViewBox& b) {
  return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)}, {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
}

std::string render_svg(const NetworkState& net, const ViewBox& box, const SvgStyle& style, const std::string& caption) {
  const double sx = style.width / (box.hi.x - box.lo.x);
  const double sy = style.height / (box.hi.y - box.lo.y);
  const double s = std::min(sx, sy);
  auto px = [&](const Vec2& p) { return coord((p.x - box.lo.x) * s) + "," + coord(style.height - (p.y - box.lo.y) * s); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
     << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < 3; ++i) {
    os << "<polyline fill=\"none\" stroke=\"" << kColors[i] << "\" stroke-width=\"2\" points=\"";
    const auto& pos = net.curve(i).position();
    for (std::size_t j = 0; j < pos.size(); ++j) os << (j ? " " : "") << px(pos[j]);
    os << "\"/>\n";
  }
  auto marker = [&](const Vec2& p, const char* fill) {
    const std::string xy = px(p);
    const auto comma = xy.find(',');
    os << "<circle cx=\"" << xy.substr(0, comma) << "\" cy=\"" << xy.substr(comma + 1) << "\" r=\"4\" fill=\"" << fill
       << "\"/>\n";
  };
  for (End e : net.junction_ends()) marker(net.curve(0).position()[node_of(e, net.intervals())], "black");
  if (net.endpoints()) {
    for (const auto& p : *net.endpoints()) marker(p, "gray");
  }
  if (!caption.empty()) os << "<text x=\"8\" y=\"18\" font-family=\"monospace\" font-size=\"13\">" << caption << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

} // namespace elastinet
