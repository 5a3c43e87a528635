#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nirbench {

/// Shortest round-trip decimal representation of a double (locale-free,
/// deterministic; parsing it back recovers the exact bits).
std::string fmt_double(double v);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// FNV-1a 64-bit over a byte string, as a 16-hex-digit string.
std::string hash_hex(std::string_view data);

bool file_exists(const std::string& path);

}  // namespace nirbench
