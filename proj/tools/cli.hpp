#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace dvrsim::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kNumerical = 3 };

inline constexpr const char* kOutputDirEnv = "DVRSIM_OUTPUT_DIR";

// The argument as given, then with ".json" appended, then the same two
// names inside the bundled scenario directory.
std::filesystem::path resolve_scenario(std::string_view arg);

// $DVRSIM_OUTPUT_DIR when set and non-empty, otherwise ./dvrsim-out.
std::filesystem::path default_output_dir();

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dvrsim::cli
