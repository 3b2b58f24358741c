#pragma once

#include <filesystem>
#include <string>

namespace vll {

/// Shortest-form rendering with 17 significant digits, locale independent.
std::string format_double(double x);

/// Writes `content` to `path` through a temporary sibling and a rename, so a
/// reader never sees a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace vll
