#pragma once

// Command-line driver: `skewlab <subcommand> [options]`. Each subcommand
// writes CSV/JSON artifacts plus manifest.json into the output directory.
//
// Exit codes: 0 when every asserted invariant holds, 1 on an invariant
// breach (the first failing check is named on stderr), 2 on a configuration
// error.

#include "skewlab/recurrence.hpp"
#include "skewlab/skew.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace skewlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitConfig = 2;

struct RunConfig {
    std::string subcommand;
    BuilderConfig builder;
    bool seed_given = false;
    std::size_t n_growth = 200;
    std::size_t n_periodic = 2000;
    std::size_t word_sample_size = 20;
    SampleGrid grid{8, 8};
    double slope_tolerance = 1e-3;
    double identity_tolerance = 1e-9;
    std::size_t ball_radius = 16;
    std::size_t burnside_n = 200;
    std::size_t partial_sum_trials = 200;
    std::size_t partial_sum_n = 1000;
    std::filesystem::path out = "skewlab_out";
    std::string config_path;

    /// Throws ConfigError on any invalid field.
    void validate() const;
};

const std::vector<std::string>& subcommands();

/// Parses argv (argv[0] is the program name) into a validated RunConfig.
/// Throws ConfigError.
RunConfig parse_arguments(int argc, const char* const* argv);

/// Runs a validated config. Returns the exit code; artifacts are written
/// even when a check fails.
int execute(const RunConfig& config, std::ostream& log);

/// parse_arguments + execute with error handling and exit-code mapping.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// File-name-safe label for a word, e.g. "1_5_9" or "2_m3".
std::string word_label(const BaseWord& word);

} // namespace skewlab::cli
