#include "vlcurate/run_header.hpp"

#include <cstdio>

namespace vlcurate {

std::string config_hash(std::string_view canonical_config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_config) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string header_line(std::string_view subcommand, std::string_view canonical_config) {
  return "# vlcurate " + std::string(kToolVersion) + " " + std::string(subcommand) +
         " config=" + config_hash(canonical_config);
}

}  // namespace vlcurate
