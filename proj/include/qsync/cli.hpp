#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace qsync {

struct CliInvocation {
    std::string command; // run | sweep | validate
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    bool no_timestamp = false;
    int threads = 1;
    double perturb_visibility = 0.0; // validate-only fault injection
};

// Exit codes: 0 success, 1 configuration error, 2 runtime error,
// 3 validation checks failed.
int cmd_run(const CliInvocation& invocation);
int cmd_sweep(const CliInvocation& invocation);
int cmd_validate(const CliInvocation& invocation);

// Full argv entry point used by the binary.
int run_cli(int argc, char** argv);

} // namespace qsync
