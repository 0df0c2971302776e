#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ramus/experiment.hpp"

namespace ramus_cli {

// Malformed or conflicting command-line/config input; main exits 2.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by --help / -h; carries the text to print before exit 0.
struct help_requested {
    std::string text;
};

enum class Command { generate_leadfield, run_case, run_custom, inspect };

// Fully resolved run description. `custom` carries the explicit case fields
// for run-custom and the modality/forward settings for generate-leadfield;
// run-case replaces it wholesale with the preset row, which is why preset
// fields may not be set individually alongside --case.
struct RunConfig {
    Command command = Command::run_case;
    std::optional<char> case_id;
    ramus::CasePreset custom;
    ramus::ExperimentSetup setup;
    std::string out_dir = "results";
    std::string leadfield_path; // input override for run commands, output for
                                // generate-leadfield, subject for inspect
    bool binary_leadfield = false;
    std::set<std::string> explicit_keys; // canonical config keys set by the user

    bool is_explicit(const std::string& key) const { return explicit_keys.count(key) > 0; }
};

// First argument selects the command; remaining flags may also come from a
// --config file of flat `section.key=value` lines (flags win, unknown keys
// are rejected by name). Empty argument list and malformed input throw
// usage_error; --help throws help_requested.
RunConfig parse_config(const std::vector<std::string>& args);

std::string usage_text();

// Every parameter with its value, marked "(default)" unless the user set it,
// plus seeds, thread count, and wall-clock time: enough to regenerate the
// run's outputs byte-identically (wall-clock aside).
std::string manifest_text(const RunConfig& cfg, double wall_seconds);

// Runs the configured command, writing outputs under cfg.out_dir for the run
// commands; returns the process exit status (0 on success).
int execute(const RunConfig& cfg);

} // namespace ramus_cli
