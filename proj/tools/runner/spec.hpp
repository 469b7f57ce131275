#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gem/config.hpp"
#include "gem/eit.hpp"
#include "gem/pulse.hpp"
#include "gem/solver.hpp"

namespace gem::runner {

enum class ExperimentKind
{
    gem_run,
    eit_run,
    fidelity_sweep,
    delta_search,
    kspace_report
};

const char* to_string(ExperimentKind kind);

enum class ModeSelection
{
    all,
    stratified,
    list
};

struct SweepSpec
{
    std::vector<Interval> intervals;
    std::vector<double> betas;
    ModeSelection selection = ModeSelection::all;
    std::size_t stratified_count = 16;
    std::vector<long> mode_list;
    std::size_t batch_size = 16;
    long probe_mode = 0;
    /// Interval and depths at which find_delta is run and the modes are
    /// swept again with the offset applied.
    std::optional<Interval> repair_interval;
    std::vector<double> repair_betas;
};

struct AnalysisOptions
{
    std::optional<Interval> input_window; // default [0, switch_time]
    std::optional<Interval> echo_window;  // default [switch_time, t_max]
    Interval storage_window{20.0, 70.0};
    Interval freeze_window{30.0, 60.0};
    double taper_fraction = 0.05;
    double profile_time = 40.0;
};

struct RecordSpec
{
    std::size_t history_stride = 0;
    std::vector<double> snapshot_times;
    std::size_t map_z_stride = 1;
};

/// Bounds on one scalar of the run; either bound may be absent.
struct Assertion
{
    std::string metric;
    std::optional<double> min;
    std::optional<double> max;
};

struct ExperimentSpec
{
    std::string name;
    ExperimentKind kind = ExperimentKind::gem_run;
    GemConfig gem;
    EitConfig eit;
    PulseSpec pulse;
    std::vector<std::string> analysis;
    AnalysisOptions options;
    RecordSpec record;
    SweepSpec sweep;
    std::string output_dir;
    bool dump_fields = false;
    std::vector<Assertion> assertions;

    bool wants(const std::string& analysis_name) const;
};

/// Parses and fully validates a spec document. Unknown keys, missing
/// required keys and invariant violations throw config_error naming the
/// key path; `source` prefixes parse-error messages.
ExperimentSpec parse_spec(const std::string& text,
                          const std::string& source = "spec");

ExperimentSpec load_spec(const std::filesystem::path& path);

/// Canonical JSON text of a spec; parse_spec(emit_spec(s)) reproduces s.
std::string emit_spec(const ExperimentSpec& spec);

/// Mode numbers a sweep visits on one interval.
std::vector<long> sweep_modes(const SweepSpec& sweep, Interval interval,
                              double bandwidth_mhz);

/// `count` modes evenly spread over the in-band set, plus both band edges.
std::vector<long> stratified_modes(const std::vector<long>& in_band,
                                   std::size_t count);

} // namespace gem::runner
