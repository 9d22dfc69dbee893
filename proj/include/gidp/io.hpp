#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace gidp::io {

// Shortest round-trip decimal form; deterministic across runs.
std::string format_double(double value);

// SHA-1 of "blob <size>\0<content>", hex encoded (what `git hash-object` prints).
std::string git_blob_hash(std::string_view content);

void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace gidp::io
