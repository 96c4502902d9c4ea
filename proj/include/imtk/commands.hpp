#ifndef IMTK_COMMANDS_HPP
#define IMTK_COMMANDS_HPP

#include <cstdint>
#include <string>

namespace imtk {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    int threads = 1;
    bool verbose = false;
};

/// Exit codes: 0 ok, 2 config/validation error, 3 condition-failure verdict,
/// 4 numerical non-convergence.
int run_command(const std::string& name, const CliOptions& options);

}  // namespace imtk

#endif
