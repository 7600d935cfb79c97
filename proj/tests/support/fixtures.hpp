#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mvr::testing {

// File names written by write_fixtures, relative to the target directory.
const std::vector<std::string>& fixture_files();

// Deterministically regenerates the checked-in sample data.
void write_fixtures(const std::filesystem::path& dir);

}  // namespace mvr::testing
