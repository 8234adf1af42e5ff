#include "elastinet/snapshot.hpp"

#include "elastinet/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace elastinet {

std::string format_real(double v) {
  // JSON readers take "-0" for the integer zero.
  if (v == 0.0 && std::signbit(v)) return "-0.0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string point(const Vec2& p) { return "[" + format_real(p.x) + ", " + format_real(p.y) + "]"; }

Vec2 read_point(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError("snapshot: a point must be an [x, y] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

std::string snapshot_json(const NetworkState& net, const EnergyParams& params) {
  std::ostringstream os;
  os << "{\n  \"topology\": \"" << to_string(net.topology()) << "\",\n  \"mu\": " << format_real(params.mu)
     << ",\n  \"curves\": [\n";
  for (std::size_t i = 0; i < 3; ++i) {
    os << "    [\n";
    const auto& pos = net.curve(i).position();
    for (std::size_t j = 0; j < pos.size(); ++j) os << "      " << point(pos[j]) << (j + 1 < pos.size() ? ",\n" : "\n");
    os << (i < 2 ? "    ],\n" : "    ]\n");
  }
  os << "  ]";
  if (net.endpoints()) {
    os << ",\n  \"endpoints\": [";
    for (std::size_t i = 0; i < 3; ++i) os << point((*net.endpoints())[i]) << (i < 2 ? ", " : "");
    os << "]";
  }
  os << "\n}\n";
  return os.str();
}

LoadedNetwork parse_snapshot(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("snapshot: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("snapshot: top level must be an object");
  if (!j.contains("topology") || !j["topology"].is_string()) throw FormatError("snapshot: missing \"topology\"");
  if (!j.contains("curves") || !j["curves"].is_array() || j["curves"].size() != 3) {
    throw FormatError("snapshot: \"curves\" must hold three curves");
  }
  LoadedNetwork out;
  const Topology topology = parse_topology(j["topology"].get<std::string>());
  if (j.contains("mu")) {
    if (!j["mu"].is_number()) throw FormatError("snapshot: \"mu\" must be a number");
    out.params.mu = j["mu"].get<double>();
  }
  std::array<std::vector<Vec2>, 3> pos;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& c = j["curves"][i];
    if (!c.is_array()) throw FormatError("snapshot: each curve must be an array of points");
    for (const auto& p : c) pos[i].push_back(read_point(p));
  }
  std::optional<std::array<Vec2, 3>> endpoints;
  if (j.contains("endpoints")) {
    const auto& e = j["endpoints"];
    if (!e.is_array() || e.size() != 3) throw FormatError("snapshot: \"endpoints\" must hold three points");
    endpoints = std::array<Vec2, 3>{read_point(e[0]), read_point(e[1]), read_point(e[2])};
  }
  try {
    out.net = NetworkState::from_positions(topology, pos, endpoints);
  } catch (const GridError& e) {
    throw FormatError(std::string("snapshot: ") + e.what());
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void save_snapshot(const std::filesystem::path& path, const NetworkState& net, const EnergyParams& params) {
  write_text_file(path, snapshot_json(net, params));
}

LoadedNetwork load_snapshot(const std::filesystem::path& path) { return parse_snapshot(read_text_file(path)); }

} // namespace elastinet
