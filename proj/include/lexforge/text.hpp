#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge::text {

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view trim(std::string_view s);

/// Trims, then collapses every internal whitespace run to one space.
std::string squeeze_spaces(std::string_view s);

/// Whole-file read; throws Error on I/O failure.
std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename so readers never see a partial file.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// 64-bit FNV-1a, used for artifact checksums (not cryptographic).
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
std::string file_checksum(const std::filesystem::path& path);

/// Splits a file into lines, dropping a trailing '\r' and a final empty line.
std::vector<std::string> lines(std::string_view contents);

} // namespace lexforge::text
