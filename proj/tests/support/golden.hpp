#pragma once

// Command lines whose standard output is frozen under tests/golden/.

#include <filesystem>
#include <string>
#include <vector>

namespace hors::testing {

struct GoldenCase {
  std::string file;  // name under tests/golden/
  std::vector<std::string> args;
};

std::vector<GoldenCase> golden_cases(const std::filesystem::path& root);

}  // namespace hors::testing
