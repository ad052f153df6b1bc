#pragma once

#include <filesystem>
#include <string>

namespace blab {

// shortest text that round-trips a double (17 significant digits)
std::string fmt17(double v);

// write to a temp file in the same directory, then rename over the target
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace blab
