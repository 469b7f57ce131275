#include "runner/experiment.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "gem/eit.hpp"
#include "gem/errors.hpp"
#include "gem/kspace.hpp"
#include "gem/metrics.hpp"
#include "gem/parallel.hpp"
#include "runner/artifacts.hpp"

#ifndef GEM_SIM_PRESET_DIR
#define GEM_SIM_PRESET_DIR ""
#endif
#ifndef GEM_SIM_INSTALL_PRESET_DIR
#define GEM_SIM_INSTALL_PRESET_DIR ""
#endif

namespace gem::runner {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string short_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string interval_tag(Interval w)
{
    return short_number(w.begin) + "-" + short_number(w.end);
}

RecordOptions record_options(const ExperimentSpec& s)
{
    RecordOptions o;
    o.history_stride = s.record.history_stride;
    o.snapshot_times = s.record.snapshot_times;
    if (s.wants("spectral_profile") || s.wants("profile"))
        o.snapshot_times.push_back(s.options.profile_time);
    if (s.wants("freeze")) {
        o.snapshot_times.push_back(s.options.freeze_window.begin);
        o.snapshot_times.push_back(s.options.freeze_window.end);
    }
    return o;
}

std::vector<double> row_times(const Grid& grid,
                              const std::vector<std::size_t>& rows)
{
    std::vector<double> t;
    for (auto i : rows)
        t.push_back(grid.t(i));
    return t;
}

std::vector<double> z_axis(const Grid& grid)
{
    std::vector<double> z(grid.nz);
    for (std::size_t j = 0; j < grid.nz; ++j)
        z[j] = grid.z(j);
    return z;
}

std::size_t stored_row(std::span<const std::size_t> rows, std::size_t t_index)
{
    auto it = std::lower_bound(rows.begin(), rows.end(), t_index);
    if (it == rows.end() || *it != t_index)
        throw analysis_error("time index " + std::to_string(t_index) +
                             " was not stored");
    return static_cast<std::size_t>(it - rows.begin());
}

void run_gem_kind(const ExperimentSpec& s, bool dump, ArtifactSet& out,
                  RunResult& res)
{
    const GemConfig& c = s.gem;
    const Grid& grid = c.grid;
    const auto rec = run_gem(c, s.pulse, record_options(s));
    out.write_series("series.csv", grid.dt(), rec.input_series,
                     rec.output_series);

    auto& sc = res.scalars;
    const double ts = c.stark.switch_time;
    const Interval in_w = s.options.input_window.value_or(Interval{0.0, ts});
    const Interval echo_w =
        s.options.echo_window.value_or(Interval{ts, grid.t_max});
    const double beta = c.optical_depth();
    sc["beta"] = beta;

    double sigma = 0.0;
    if (s.wants("efficiency") || s.wants("convergence")) {
        sigma = efficiency_numeric(rec, in_w, echo_w);
        sc["sigma"] = sigma;
        sc["sigma_analytic"] = efficiency_analytic(beta);
        sc["sigma_error"] = std::abs(sigma - sc["sigma_analytic"]);
    }
    if (s.wants("fidelity")) {
        const auto rep = storage_report(rec);
        sc["fidelity"] = rep.fidelity;
        sc["shape"] = rep.shape;
        sc["tau_us"] = rep.tau;
        sc["sigma_echo"] = rep.sigma;
    }
    if (s.wants("echo_peak"))
        sc["echo_peak_us"] = echo_peak_time(rec, echo_w);
    if (s.wants("energy_balance"))
        sc["energy_balance_error"] = excitation_balance_error(rec);
    if (s.wants("spectral_profile")) {
        const std::size_t r = stored_row(rec.row_index,
                                         grid.time_index(s.options.profile_time));
        sc["spectral_correlation"] =
            spectral_profile_correlation(rec, r, c.stark.eval(0.0));
    }

    std::optional<KSpaceRecord> ks;
    if (s.wants("kspace")) {
        const auto d = storage_diagnostics(rec, s.options.storage_window,
                                           s.options.taper_fraction);
        sc["phi_residual_max"] = d.phi_residual_max;
        sc["polariton_norm_drift"] = d.polariton_norm_drift;
        sc["psi_norm_drift"] = d.psi_norm_drift;
        sc["centroid_slope_error"] = d.centroid_slope_error;
        if (d.centroid_freeze_drift >= 0.0)
            sc["centroid_freeze_drift"] = d.centroid_freeze_drift;

        ks = to_kspace(rec, c.linear_density);
        std::vector<std::vector<double>> rows;
        for (std::size_t r = 0; r < ks->row_index.size(); ++r) {
            try {
                rows.push_back({ks->times[r], k_centroid(*ks, ks->row_index[r]),
                                ks->slope[r]});
            } catch (const analysis_error&) {
                // No excitation yet (or any more): no centroid to report.
            }
        }
        out.write_csv("centroid.csv", {"t_us", "k_centroid", "eta"}, rows);
    }

    if (dump && !rec.row_index.empty()) {
        const auto times = row_times(grid, rec.row_index);
        const auto z = z_axis(grid);
        const std::size_t stride = s.record.map_z_stride;
        out.write_magnitude_map("abs_E.csv", rec.e_field, times, z, stride);
        out.write_magnitude_map("abs_alpha.csv", rec.polarisation, times, z,
                                stride);
        if (ks) {
            out.write_magnitude_map("abs_psi.csv", ks->psi, times, ks->k_axis,
                                    stride);
            out.write_magnitude_map("abs_phi.csv", ks->phi, times, ks->k_axis,
                                    stride);
        }
    }

    if (s.wants("convergence")) {
        GemConfig fine = c;
        fine.grid.nz = 2 * grid.nz - 1;
        fine.grid.nt = 2 * grid.nt - 1;
        const auto fine_rec = run_gem(fine, s.pulse);
        const double fine_sigma = efficiency_numeric(fine_rec, in_w, echo_w);
        const double change =
            sigma > 0.0 ? std::abs(fine_sigma - sigma) / sigma
                        : std::abs(fine_sigma - sigma);
        sc["sigma_fine"] = fine_sigma;
        sc["convergence_change"] = change;
        if (!(change < convergence_tolerance))
            res.failures.push_back(
                "convergence check failed: halving dt and dz changed the echo "
                "efficiency by " +
                short_number(100.0 * change) + "% (limit " +
                short_number(100.0 * convergence_tolerance) + "%)");
    }
}

double profile_change(std::span<const complex> a, std::span<const complex> b)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = std::abs(a[j]) - std::abs(b[j]);
        num += d * d;
        den += std::norm(a[j]);
    }
    if (!(den > 0.0))
        throw analysis_error("spin wave is empty at the start of the window");
    return std::sqrt(num / den);
}

void run_eit_kind(const ExperimentSpec& s, bool dump, ArtifactSet& out,
                  RunResult& res)
{
    const EitConfig& c = s.eit;
    const Grid& grid = c.grid;
    const auto rec = run_eit(c, s.pulse, record_options(s));
    out.write_series("series.csv", grid.dt(), rec.input_series,
                     rec.output_series);
    auto& sc = res.scalars;

    if (s.wants("efficiency")) {
        const double in = input_energy(rec, {0.0, grid.t_max});
        if (!(in > 0.0))
            throw analysis_error("zero input energy");
        const Interval echo = s.options.echo_window.value_or(
            Interval{std::min(c.switch_up, grid.t_max - grid.dt()), grid.t_max});
        sc["sigma"] = output_energy(rec, echo) / in;
        if (c.switch_down > grid.dt())
            sc["leak_before_storage"] =
                output_energy(rec, {0.0, std::min(c.switch_down, grid.t_max)}) / in;
    }
    if (s.wants("freeze")) {
        const auto a = rec.row(grid.time_index(s.options.freeze_window.begin));
        const auto b = rec.row(grid.time_index(s.options.freeze_window.end));
        sc["spin_wave_freeze"] =
            profile_change(rec.spin_wave.row(a), rec.spin_wave.row(b));
    }
    std::optional<ComplexMatrix> polariton;
    if (s.wants("profile") || dump)
        polariton = eit_polariton(rec, rec.control);
    if (s.wants("profile")) {
        const auto r = rec.row(grid.time_index(s.options.profile_time));
        sc["profile_correlation"] =
            stored_profile_correlation(rec, polariton->row(r));
    }
    if (dump && !rec.row_index.empty()) {
        const auto times = row_times(grid, rec.row_index);
        const auto z = z_axis(grid);
        const std::size_t stride = s.record.map_z_stride;
        out.write_magnitude_map("abs_E.csv", rec.e_field, times, z, stride);
        out.write_magnitude_map("abs_P.csv", rec.polarisation, times, z, stride);
        out.write_magnitude_map("abs_S.csv", rec.spin_wave, times, z, stride);
        out.write_magnitude_map("abs_polariton.csv", *polariton, times, z, stride);
    }
}

struct BetaSummary
{
    double min_f = 1e300;
    double mean_f = 0.0;
    double min_shape = 1e300;
    double min_sigma = 1e300;
    double max_sigma = 0.0;
    long worst_mode = 0;
    std::size_t count = 0;
};

std::map<double, BetaSummary> summarise(std::span<const SweepRow> rows)
{
    std::map<double, BetaSummary> out;
    for (const auto& r : rows) {
        auto& b = out[r.beta];
        if (r.report.fidelity < b.min_f) {
            b.min_f = r.report.fidelity;
            b.worst_mode = r.mode;
        }
        b.mean_f += r.report.fidelity;
        b.min_shape = std::min(b.min_shape, r.report.shape);
        b.min_sigma = std::min(b.min_sigma, r.report.sigma);
        b.max_sigma = std::max(b.max_sigma, r.report.sigma);
        ++b.count;
    }
    for (auto& [beta, b] : out)
        b.mean_f /= static_cast<double>(b.count);
    return out;
}

json summary_json(Interval w, const std::map<double, BetaSummary>& sums,
                  std::map<std::string, double>& sc, const std::string& prefix)
{
    json list = json::array();
    for (const auto& [beta, b] : sums) {
        list.push_back({{"beta", beta},
                        {"min_F", b.min_f},
                        {"mean_F", b.mean_f},
                        {"min_shape", b.min_shape},
                        {"min_sigma", b.min_sigma},
                        {"max_sigma", b.max_sigma},
                        {"worst_mode", b.worst_mode},
                        {"modes", b.count}});
        sc[sweep_key(prefix + "min_F", w, beta)] = b.min_f;
        sc[sweep_key(prefix + "mean_F", w, beta)] = b.mean_f;
        sc[sweep_key(prefix + "min_shape", w, beta)] = b.min_shape;
        sc[sweep_key(prefix + "min_sigma", w, beta)] = b.min_sigma;
        sc[sweep_key(prefix + "max_sigma", w, beta)] = b.max_sigma;
    }
    return {{"interval", json::array({w.begin, w.end})}, {"betas", list}};
}

void run_sweep_kind(const ExperimentSpec& s, std::size_t workers,
                    ArtifactSet& out, RunResult& res)
{
    const GemConfig& c = s.gem;
    const double band_mhz = c.bandwidth() / (2.0 * std::numbers::pi);
    auto& sc = res.scalars;
    SweepOptions opts;
    opts.workers = workers;
    opts.batch_size = s.sweep.batch_size;

    json summary;
    summary["intervals"] = json::array();
    double overall_min = 1e300;
    for (const auto& w : s.sweep.intervals) {
        const auto modes = sweep_modes(s.sweep, w, band_mhz);
        const auto rows = mode_fidelity_sweep(c, w, s.sweep.betas, modes, opts);
        out.write_sweep("sweep_" + interval_tag(w) + ".csv", rows);
        const auto sums = summarise(rows);
        summary["intervals"].push_back(summary_json(w, sums, sc, ""));
        for (const auto& [beta, b] : sums)
            overall_min = std::min(overall_min, b.min_f);
    }
    sc["min_F"] = overall_min;

    if (s.sweep.repair_interval) {
        const Interval w = *s.sweep.repair_interval;
        const auto modes = sweep_modes(s.sweep, w, band_mhz);
        std::vector<SweepRow> all;
        json repairs = json::array();
        for (double beta : s.sweep.repair_betas) {
            const auto ds =
                find_delta(with_optical_depth(c, beta), w, s.sweep.probe_mode);
            SweepOptions o = opts;
            o.delta = {ds.delta};
            const auto rows = mode_fidelity_sweep(c, w, std::vector<double>{beta},
                                                  modes, o);
            all.insert(all.end(), rows.begin(), rows.end());
            repairs.push_back({{"beta", beta},
                               {"delta", ds.delta},
                               {"estimate", ds.estimate},
                               {"probe_F_before", ds.fidelity_before},
                               {"probe_F_after", ds.fidelity_after},
                               {"improved", ds.improved},
                               {"solver_runs", ds.evaluations}});
            sc[sweep_key("delta", w, beta)] = ds.delta;
            sc[sweep_key("probe_F_before", w, beta)] = ds.fidelity_before;
            sc[sweep_key("probe_F_after", w, beta)] = ds.fidelity_after;
        }
        out.write_sweep("sweep_" + interval_tag(w) + "_repaired.csv", all);
        summary["repair"] = summary_json(w, summarise(all), sc, "repaired_");
        summary["repair"]["search"] = repairs;
    }
    out.write_text("summary.json", summary.dump(2) + "\n");
}

void run_delta_kind(const ExperimentSpec& s, std::size_t workers,
                    ArtifactSet& out, RunResult& res)
{
    const GemConfig& c = s.gem;
    const Interval w = s.sweep.intervals.front();
    const double beta = c.optical_depth();
    const auto ds = find_delta(c, w, s.sweep.probe_mode);
    auto& sc = res.scalars;
    sc["beta"] = beta;
    sc["delta"] = ds.delta;
    sc["delta_estimate"] = ds.estimate;
    sc["fidelity_before"] = ds.fidelity_before;
    sc["fidelity_after"] = ds.fidelity_after;
    sc["improved"] = ds.improved ? 1.0 : 0.0;

    const double band_mhz = c.bandwidth() / (2.0 * std::numbers::pi);
    const auto modes = sweep_modes(s.sweep, w, band_mhz);
    SweepOptions opts;
    opts.workers = workers;
    opts.batch_size = s.sweep.batch_size;
    opts.delta = {0.0};
    const auto before = mode_fidelity_sweep(c, w, std::vector<double>{beta}, modes, opts);
    opts.delta = {ds.delta};
    const auto after = mode_fidelity_sweep(c, w, std::vector<double>{beta}, modes, opts);
    out.write_sweep("modes_before.csv", before);
    out.write_sweep("modes_after.csv", after);
    std::size_t raised = 0;
    double min_before = 1e300;
    double min_after = 1e300;
    for (std::size_t i = 0; i < before.size(); ++i) {
        raised += after[i].report.fidelity >= before[i].report.fidelity;
        min_before = std::min(min_before, before[i].report.fidelity);
        min_after = std::min(min_after, after[i].report.fidelity);
    }
    sc["min_F_before"] = min_before;
    sc["min_F_after"] = min_after;
    sc["modes_raised_fraction"] =
        static_cast<double>(raised) / static_cast<double>(before.size());
}

void write_manifest(const ExperimentSpec& spec, const ArtifactSet& out,
                    const RunResult& res)
{
    json files = json::array();
    for (const auto& name : out.files()) {
        const fs::path p = out.dir() / name;
        files.push_back({{"name", name},
                         {"sha256", sha256_file(p)},
                         {"bytes", fs::file_size(p)}});
    }
    json asserts = json::array();
    for (const auto& a : res.assertions) {
        json item = {{"metric", a.assertion.metric}, {"passed", a.passed}};
        if (a.assertion.min)
            item["min"] = *a.assertion.min;
        if (a.assertion.max)
            item["max"] = *a.assertion.max;
        item["value"] = a.value ? json(*a.value) : json(nullptr);
        asserts.push_back(item);
    }
    json m;
    m["name"] = spec.name;
    m["kind"] = to_string(spec.kind);
    m["complete"] = res.complete;
    if (!res.error.empty())
        m["error"] = res.error;
    m["files"] = files;
    m["scalars"] = res.scalars;
    m["assertions"] = asserts;
    m["failures"] = res.failures;
    m["passed"] = res.passed();
    m["spec"] = json::parse(emit_spec(spec));
    std::ofstream f(out.dir() / "manifest.json", std::ios::binary);
    f << m.dump(2) << '\n';
    if (!f)
        throw std::runtime_error("cannot write manifest.json");
}

} // namespace

bool RunResult::passed() const
{
    return complete && failures.empty() &&
           std::all_of(assertions.begin(), assertions.end(),
                       [](const AssertionResult& a) { return a.passed; });
}

std::string sweep_key(const std::string& what, Interval interval, double beta)
{
    return what + "@" + interval_tag(interval) + "@beta=" + short_number(beta);
}

RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options)
{
    RunResult res;
    res.dir = options.out_root / spec.output_dir;
    ArtifactSet out(res.dir);
    const bool dump = spec.dump_fields || options.dump_fields;
    const std::size_t workers =
        options.workers > 0 ? options.workers : default_workers();
    try {
        switch (spec.kind) {
        case ExperimentKind::gem_run:
        case ExperimentKind::kspace_report:
            run_gem_kind(spec, dump, out, res);
            break;
        case ExperimentKind::eit_run: run_eit_kind(spec, dump, out, res); break;
        case ExperimentKind::fidelity_sweep:
            run_sweep_kind(spec, workers, out, res);
            break;
        case ExperimentKind::delta_search:
            run_delta_kind(spec, workers, out, res);
            break;
        }
    } catch (const std::exception& e) {
        res.complete = false;
        res.error = e.what();
    }
    for (const auto& a : spec.assertions) {
        AssertionResult r{a, std::nullopt, false};
        if (auto it = res.scalars.find(a.metric); it != res.scalars.end()) {
            r.value = it->second;
            r.passed = std::isfinite(it->second) &&
                       (!a.min || it->second >= *a.min) &&
                       (!a.max || it->second <= *a.max);
        }
        res.assertions.push_back(r);
    }
    write_manifest(spec, out, res);
    return res;
}

void check_output_writable(const ExperimentSpec& spec, const fs::path& out_root)
{
    fs::path p = fs::absolute(out_root / spec.output_dir);
    while (!fs::exists(p)) {
        if (!p.has_parent_path() || p.parent_path() == p)
            throw config_error("output_dir", "no existing ancestor directory");
        p = p.parent_path();
    }
    if (!fs::is_directory(p))
        throw config_error("output_dir", p.string() + " is not a directory");
    if (::access(p.c_str(), W_OK) != 0)
        throw config_error("output_dir", p.string() + " is not writable");
}

fs::path preset_dir()
{
    if (const char* env = std::getenv("GEM_SIM_PRESETS"))
        return env;
    for (const char* dir : {GEM_SIM_PRESET_DIR, GEM_SIM_INSTALL_PRESET_DIR}) {
        if (*dir && fs::is_directory(dir))
            return dir;
    }
    return "presets";
}

std::vector<std::string> list_presets()
{
    std::vector<std::string> names;
    const fs::path dir = preset_dir();
    if (!fs::is_directory(dir))
        return names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json")
            names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

fs::path find_preset(const std::string& name)
{
    const fs::path p = preset_dir() / (name + ".json");
    if (!fs::is_regular_file(p))
        throw std::invalid_argument("no preset named '" + name + "' in " +
                                    preset_dir().string());
    return p;
}

} // namespace gem::runner
