#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace vlcurate {

inline constexpr std::string_view kToolVersion = "0.1.0";

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string config_hash(std::string_view canonical_config);

// "# vlcurate <version> <subcommand> config=<hash>"
std::string header_line(std::string_view subcommand, std::string_view canonical_config);

}  // namespace vlcurate
