#pragma once
// Command-line front end. Subcommands: noise-check, demo-bep,
// attack-bilateral, attack-unilateral, monte-carlo. Nothing is computed or
// written before the full configuration validates.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kljn/harness.hpp"

namespace kljn::cli {

// Stable exit-code contract (see README).
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,    // a validation subcommand's verdict failed
    kUsage = 2,          // unknown flag / bad command line
    kConfigIo = 3,       // config file unreadable
    kUnknownKey = 4,     // config key not documented
    kInvalidValue = 5,   // config invariant violation
    kRuntimeError = 6,   // failure during computation or output
};

struct Invocation {
    std::string subcommand;
    ExperimentConfig config;                       // fully validated
    std::filesystem::path out_dir;                 // empty = no file output
    std::optional<std::uint64_t> seed_override;
    std::string kernels = "auto";                  // auto|scalar|avx2
};

// Parses argv (without the program name), loads the config file if given,
// applies --set overrides then --seed, validates everything. Throws the
// kljn config errors and std::invalid_argument for usage problems.
Invocation parse_and_validate(const std::vector<std::string>& args);

// Full front end; returns an ExitCode value.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace kljn::cli
