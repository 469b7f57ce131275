#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "runner/spec.hpp"

namespace gem::runner {

struct RunOptions
{
    /// Root that spec output directories are resolved against.
    std::filesystem::path out_root = ".";
    /// Worker threads for sweeps; 0 picks default_workers().
    std::size_t workers = 0;
    /// Forces field and k-space map dumps on.
    bool dump_fields = false;
};

struct AssertionResult
{
    Assertion assertion;
    std::optional<double> value; // empty when the metric was not produced
    bool passed = false;
};

struct RunResult
{
    std::filesystem::path dir;
    std::map<std::string, double> scalars;
    std::vector<AssertionResult> assertions;
    /// Built-in checks that failed (convergence), in plain words.
    std::vector<std::string> failures;
    bool complete = true;
    std::string error;

    bool passed() const;
    int exit_code() const { return passed() ? 0 : 1; }
};

/// Relative change of the echo efficiency beyond which the convergence
/// analysis fails the run.
inline constexpr double convergence_tolerance = 0.005;

/// Runs a validated spec, writes its artifacts and manifest.json into
/// out_root / spec.output_dir and evaluates the spec's assertions. Solver
/// failures are caught: the manifest is written with "complete": false.
RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options);

/// Throws config_error("output_dir", ...) when the output directory cannot
/// be created or written.
void check_output_writable(const ExperimentSpec& spec,
                           const std::filesystem::path& out_root);

/// Directory holding the shipped presets: GEM_SIM_PRESETS if set, else the
/// source tree, else the install location.
std::filesystem::path preset_dir();

/// Preset names (file stems), sorted.
std::vector<std::string> list_presets();

/// Path of preset `name`; throws std::invalid_argument if absent.
std::filesystem::path find_preset(const std::string& name);

/// Key under which sweep scalars are reported, e.g.
/// sweep_key("min_F", {35, 45}, 0.75) == "min_F@35-45@beta=0.75".
std::string sweep_key(const std::string& what, Interval interval, double beta);

} // namespace gem::runner
