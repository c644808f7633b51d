#ifndef CAVITYNOON_RUNNER_HPP
#define CAVITYNOON_RUNNER_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cavitynoon/model.hpp"
#include "cavitynoon/states.hpp"

namespace cavitynoon::runner {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kPhysicsError = 3,
    kTruncationError = 4,
};

enum class Mode { Spectrum, Simulate, BellFit, OracleCompare, Degeneracy, IdentityCheck };

struct RunConfig {
    Mode mode = Mode::Simulate;
    ModelParams params{1.0, 0.15, 0.1, 0.5};
    InitialNoonState state{1, {0.0, 0.0}};
    double epsilon = 1e-10;
    int truncation_cap = states::kTruncationCap;
    std::string output = "out.csv";

    // simulate / oracle-compare grid (omega*t units)
    double t_max = 0.0;
    int steps = 1;
    std::optional<std::vector<double>> explicit_grid;

    // spectrum / degeneracy
    BlockIndex block{0, 0};
    double lambda_min = 0.0;
    double lambda_max = 0.2;
    int lambda_steps = 1;

    // bellfit
    double omega_t = 0.0;

    // identity-check
    double identity_x = 0.0;      // 0 -> derive from params per mode
    int identity_n_max = 60;
    int identity_max_n = 3;

    // oracle-compare
    int n_max_local = 20;

    double zero_tol = 1e-6;
    int seed = 12345;             // randomized property tooling only
};

/// Executes one configured pipeline, writing the CSV data file and a JSON
/// manifest (<output>.manifest.json) that captures every effective
/// parameter.  Returns an ExitCode value.
int run(const RunConfig& config);

/// Full command-line entry: subcommand + flags (optionally layered over a
/// flat JSON config file, flags override).  Prints a single-line
/// machine-parseable error on failure.
int run_cli(int argc, const char* const* argv);

/// Parse without executing (exposed for tests).  Returns std::nullopt and
/// sets `exit_code` when parsing fails or --help was requested.
std::optional<RunConfig> parse_cli(const std::vector<std::string>& args, int& exit_code,
                                   std::string& error_message);

/// Worker-thread cap honoring the CAVITY_NOON_THREADS environment variable.
int thread_budget();

} // namespace cavitynoon::runner

#endif
