#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "weylscope/pseudogeom.hpp"

namespace weylscope::cli {

enum class Command { gb, tube, egregium, lc_check, m11, dist_suite, j_suite, weyl_suite };
enum class Format { json, csv };

std::string_view to_string(Command c);
std::string_view version();

/// Process exit codes.
enum ExitCode : int {
    exit_pass = 0,
    exit_verdict_failure = 1,
    exit_precondition_failure = 2,
    exit_config_error = 3,
};

/// A fully validated run. Optional fields fall back to per-command defaults.
struct RunConfig {
    Command command = Command::gb;
    AmbientSpace ambient{2, 1};
    std::string target;
    int grid = 2048;
    int t_samples = 1024;
    double window = 0.1;
    int scan = 64;
    std::optional<double> tol;
    std::uint64_t seed = 42;
    std::optional<std::uint64_t> samples;
    double radius = 0.1;
    std::string out;  // empty: standard output
    Format format = Format::json;

    /// gb 5e-3, egregium 1e-6, tube 3 (standard errors); unused elsewhere.
    double effective_tol() const;
    /// tube 1e6 Monte Carlo samples, egregium 200 points.
    std::uint64_t effective_samples() const;
    nlohmann::json to_json() const;
};

struct KeyInfo {
    std::string key;
    std::string default_value;
    std::string help;
};
/// Every accepted configuration key, in documentation order.
const std::vector<KeyInfo>& config_keys();

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses whitespace-separated key=value tokens (# starts a comment), then
/// applies overrides, then validates. Throws Error with parse_error (with
/// line and column) or validation_error / unknown_target (naming the key).
RunConfig parse_config(std::string_view text, const Overrides& overrides = {});

struct RunOutcome {
    int exit_code = exit_pass;
    nlohmann::json report;  // embeds the resolved config and version
    std::string summary;    // one human-readable line
};

/// Dispatches to the evaluator or suite. Library errors after dispatch become
/// exit_precondition_failure with the error recorded in the report.
RunOutcome run(const RunConfig& cfg);

/// Serializes the report in the configured format.
void write_report(std::ostream& out, const RunOutcome& outcome, Format format);

}  // namespace weylscope::cli
