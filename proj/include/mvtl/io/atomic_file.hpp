#pragma once

#include <filesystem>
#include <string>

namespace mvtl::io {

/// Writes `content` to a temporary file next to `path` and renames it into
/// place, so readers never see a partial file. Creates parent directories.
/// Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Whole file as a string; throws std::runtime_error when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace mvtl::io
