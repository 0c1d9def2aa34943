#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace micvib {

std::string read_text_file(const std::filesystem::path& path);
// Writes to a temporary sibling and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace micvib
