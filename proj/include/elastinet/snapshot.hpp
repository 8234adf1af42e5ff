#pragma once

#include "elastinet/network.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace elastinet {

/// Network state at one time of a flow.
struct Snapshot {
  double time = 0.0;
  NetworkState net;
};

/// Network together with the energy weight it was saved with.
struct LoadedNetwork {
  NetworkState net;
  EnergyParams params;
};

/// JSON object {"topology", "mu", "curves", "endpoints"?}; numbers carry 17 significant digits.
std::string snapshot_json(const NetworkState& net, const EnergyParams& params);
/// Throws FormatError on malformed text.
LoadedNetwork parse_snapshot(std::string_view text);

/// Throws IoError when the file cannot be written.
void save_snapshot(const std::filesystem::path& path, const NetworkState& net, const EnergyParams& params);
/// Throws IoError when unreadable, FormatError when malformed.
LoadedNetwork load_snapshot(const std::filesystem::path& path);

/// Decimal text with 17 significant digits (round-trips every double).
std::string format_real(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace elastinet
