#include "runner/spec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gem/errors.hpp"

namespace gem::runner {

namespace {

using json = nlohmann::json;

const std::set<std::string> gem_analyses{
    "efficiency", "fidelity",         "echo_peak",  "energy_balance",
    "kspace",     "spectral_profile", "convergence"};
const std::set<std::string> eit_analyses{"efficiency", "freeze", "profile"};

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string type_name(const json& j)
{
    return j.type_name();
}

// Reads the members of one JSON object, remembering which keys were
// consumed so that leftovers can be reported as unknown.
class Reader
{
public:
    Reader(const json& j, std::string path) : m_json(j), m_path(std::move(path))
    {
        if (!j.is_object())
            throw config_error(m_path, "expected an object, got " + type_name(j));
    }

    const std::string& path() const { return m_path; }

    bool has(const char* key) const { return m_json.contains(key); }

    const json& at(const char* key)
    {
        m_used.insert(key);
        if (!m_json.contains(key))
            throw config_error(join(m_path, key), "required key missing");
        return m_json.at(key);
    }

    double number(const char* key)
    {
        const json& v = at(key);
        if (!v.is_number())
            throw config_error(join(m_path, key),
                               "expected a number, got " + type_name(v));
        return v.get<double>();
    }

    double number(const char* key, double fallback)
    {
        return has(key) ? number(key) : (m_used.insert(key), fallback);
    }

    std::size_t count(const char* key)
    {
        const json& v = at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw config_error(join(m_path, key),
                               "expected a non-negative integer");
        return v.get<std::size_t>();
    }

    std::size_t count(const char* key, std::size_t fallback)
    {
        return has(key) ? count(key) : (m_used.insert(key), fallback);
    }

    long integer(const char* key, long fallback)
    {
        m_used.insert(key);
        if (!has(key))
            return fallback;
        const json& v = m_json.at(key);
        if (!v.is_number_integer())
            throw config_error(join(m_path, key), "expected an integer");
        return v.get<long>();
    }

    std::string text(const char* key)
    {
        const json& v = at(key);
        if (!v.is_string())
            throw config_error(join(m_path, key), "expected a string");
        return v.get<std::string>();
    }

    std::string text(const char* key, const std::string& fallback)
    {
        return has(key) ? text(key) : (m_used.insert(key), fallback);
    }

    bool flag(const char* key, bool fallback)
    {
        m_used.insert(key);
        if (!has(key))
            return fallback;
        const json& v = m_json.at(key);
        if (!v.is_boolean())
            throw config_error(join(m_path, key), "expected true or false");
        return v.get<bool>();
    }

    void finish() const
    {
        for (const auto& item : m_json.items()) {
            if (!m_used.count(item.key()))
                throw config_error(join(m_path, item.key()), "unknown key");
        }
    }

private:
    const json& m_json;
    std::string m_path;
    std::set<std::string> m_used;
};

Interval read_interval(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
        !j[1].is_number())
        throw config_error(path, "expected [begin, end]");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> read_numbers(const json& j, const std::string& path)
{
    if (!j.is_array())
        throw config_error(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw config_error(path + "[" + std::to_string(i) + "]",
                               "expected a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

Grid read_grid(const json& j, const std::string& path)
{
    Reader r(j, path);
    Grid g;
    g.z_min = r.number("z_min");
    g.z_max = r.number("z_max");
    g.nz = r.count("nz");
    g.t_max = r.number("t_max");
    g.nt = r.count("nt");
    r.finish();
    return g;
}

StarkProfile read_stark(const json& j, const std::string& path)
{
    Reader r(j, path);
    StarkProfile s;
    s.eta0 = r.number("eta0");
    s.switch_time = r.number("switch_time");
    s.ramp_tau = r.number("ramp_tau", 0.0);
    s.delta_offset = r.number("delta_offset", 0.0);
    if (r.has("freeze_intervals")) {
        const json& list = r.at("freeze_intervals");
        const std::string p = join(path, "freeze_intervals");
        if (!list.is_array())
            throw config_error(p, "expected a list of [begin, end]");
        for (std::size_t i = 0; i < list.size(); ++i)
            s.freeze_intervals.push_back(
                read_interval(list[i], p + "[" + std::to_string(i) + "]"));
    }
    r.finish();
    return s;
}

GemConfig read_gem_config(const json& j, const std::string& path)
{
    Reader r(j, path);
    GemConfig c;
    c.g = r.number("g");
    c.linear_density = r.number("linear_density");
    c.gamma = r.number("gamma", 0.0);
    c.stark = read_stark(r.at("stark"), join(path, "stark"));
    c.grid = read_grid(r.at("grid"), join(path, "grid"));
    r.finish();
    c.validate(path.c_str());
    return c;
}

EitConfig read_eit_config(const json& j, const std::string& path)
{
    Reader r(j, path);
    EitConfig c;
    c.n_atoms = r.number("n_atoms");
    c.g = r.number("g");
    c.omega_c0 = r.number("omega_c0");
    c.switch_down = r.number("switch_down");
    c.switch_up = r.number("switch_up");
    c.ramp_tau = r.number("ramp_tau");
    c.gamma_e = r.number("gamma_e", 1.0);
    c.time_unit_us = r.number("time_unit_us", 1.0);
    c.grid = read_grid(r.at("grid"), join(path, "grid"));
    r.finish();
    c.validate(path.c_str());
    return c;
}

PulseKind read_pulse_kind(const std::string& s, const std::string& path)
{
    if (s == "gaussian")
        return PulseKind::gaussian;
    if (s == "modulated")
        return PulseKind::modulated;
    if (s == "plane_wave_window")
        return PulseKind::plane_wave_window;
    throw config_error(path, "unknown pulse kind '" + s + "'");
}

const char* pulse_kind_name(PulseKind k)
{
    switch (k) {
    case PulseKind::gaussian: return "gaussian";
    case PulseKind::modulated: return "modulated";
    case PulseKind::plane_wave_window: return "plane_wave_window";
    }
    return "gaussian";
}

PulseSpec read_pulse(const json& j, const std::string& path)
{
    Reader r(j, path);
    PulseSpec p;
    p.kind = read_pulse_kind(r.text("kind"), join(path, "kind"));
    if (r.has("amplitude")) {
        const json& a = r.at("amplitude");
        if (a.is_number())
            p.amplitude = a.get<double>();
        else if (a.is_array() && a.size() == 2 && a[0].is_number() &&
                 a[1].is_number())
            p.amplitude = {a[0].get<double>(), a[1].get<double>()};
        else
            throw config_error(join(path, "amplitude"),
                               "expected a number or [re, im]");
    }
    if (p.kind == PulseKind::plane_wave_window) {
        p.mode_index = r.integer("mode_index", 0);
        p.window = read_interval(r.at("window"), join(path, "window"));
    } else {
        p.center = r.number("center");
        p.width = r.number("width");
        if (p.kind == PulseKind::modulated) {
            p.mod_freq = r.number("mod_freq");
            p.mod_depth = r.number("mod_depth", p.mod_depth);
        }
    }
    r.finish();
    p.validate(path.c_str());
    return p;
}

ExperimentKind read_kind(const std::string& s, const std::string& path)
{
    for (auto k : {ExperimentKind::gem_run, ExperimentKind::eit_run,
                   ExperimentKind::fidelity_sweep, ExperimentKind::delta_search,
                   ExperimentKind::kspace_report}) {
        if (s == to_string(k))
            return k;
    }
    throw config_error(path, "unknown experiment kind '" + s + "'");
}

void check_window(Interval w, const Grid& grid, const std::string& path)
{
    if (!(w.end > w.begin) || w.begin < 0.0 || w.end > grid.t_max)
        throw config_error(path, "window must satisfy 0 <= begin < end <= t_max");
}

SweepSpec read_sweep(const json& j, const std::string& path)
{
    Reader r(j, path);
    SweepSpec s;
    const json& list = r.at("intervals");
    if (!list.is_array() || list.empty())
        throw config_error(join(path, "intervals"), "expected a non-empty list");
    for (std::size_t i = 0; i < list.size(); ++i)
        s.intervals.push_back(read_interval(
            list[i], join(path, "intervals") + "[" + std::to_string(i) + "]"));
    if (r.has("betas"))
        s.betas = read_numbers(r.at("betas"), join(path, "betas"));
    const std::string sel = r.text("modes", "all");
    if (sel == "all")
        s.selection = ModeSelection::all;
    else if (sel == "stratified")
        s.selection = ModeSelection::stratified;
    else if (sel == "list")
        s.selection = ModeSelection::list;
    else
        throw config_error(join(path, "modes"),
                           "expected \"all\", \"stratified\" or \"list\"");
    s.stratified_count = r.count("stratified_count", s.stratified_count);
    if (r.has("mode_list")) {
        const json& m = r.at("mode_list");
        if (!m.is_array())
            throw config_error(join(path, "mode_list"), "expected integers");
        for (const auto& v : m) {
            if (!v.is_number_integer())
                throw config_error(join(path, "mode_list"), "expected integers");
            s.mode_list.push_back(v.get<long>());
        }
    }
    if (s.selection == ModeSelection::list && s.mode_list.empty())
        throw config_error(join(path, "mode_list"), "required for modes = list");
    s.batch_size = r.count("batch_size", s.batch_size);
    if (s.batch_size == 0)
        throw config_error(join(path, "batch_size"), "must be positive");
    s.probe_mode = r.integer("probe_mode", 0);
    if (r.has("repair_interval"))
        s.repair_interval =
            read_interval(r.at("repair_interval"), join(path, "repair_interval"));
    if (r.has("repair_betas"))
        s.repair_betas =
            read_numbers(r.at("repair_betas"), join(path, "repair_betas"));
    r.finish();
    for (std::size_t i = 0; i < s.betas.size(); ++i) {
        if (!(s.betas[i] > 0.0) || !std::isfinite(s.betas[i]))
            throw config_error(join(path, "betas") + "[" + std::to_string(i) + "]",
                               "optical depth must be positive");
    }
    for (double b : s.repair_betas) {
        if (!(b > 0.0))
            throw config_error(join(path, "repair_betas"),
                               "optical depth must be positive");
    }
    if (!s.repair_betas.empty() && !s.repair_interval)
        throw config_error(join(path, "repair_interval"),
                           "required with repair_betas");
    return s;
}

AnalysisOptions read_options(const json& j, const std::string& path)
{
    Reader r(j, path);
    AnalysisOptions o;
    if (r.has("input_window"))
        o.input_window = read_interval(r.at("input_window"), join(path, "input_window"));
    if (r.has("echo_window"))
        o.echo_window = read_interval(r.at("echo_window"), join(path, "echo_window"));
    if (r.has("storage_window"))
        o.storage_window =
            read_interval(r.at("storage_window"), join(path, "storage_window"));
    if (r.has("freeze_window"))
        o.freeze_window =
            read_interval(r.at("freeze_window"), join(path, "freeze_window"));
    o.taper_fraction = r.number("taper_fraction", o.taper_fraction);
    o.profile_time = r.number("profile_time", o.profile_time);
    r.finish();
    if (!(o.taper_fraction >= 0.0 && o.taper_fraction < 0.5))
        throw config_error(join(path, "taper_fraction"), "must lie in [0, 0.5)");
    return o;
}

RecordSpec read_record(const json& j, const std::string& path)
{
    Reader r(j, path);
    RecordSpec rec;
    rec.history_stride = r.count("history_stride", 0);
    if (r.has("snapshot_times"))
        rec.snapshot_times =
            read_numbers(r.at("snapshot_times"), join(path, "snapshot_times"));
    rec.map_z_stride = r.count("map_z_stride", 1);
    if (rec.map_z_stride == 0)
        throw config_error(join(path, "map_z_stride"), "must be positive");
    r.finish();
    return rec;
}

Assertion read_assertion(const json& j, const std::string& path)
{
    Reader r(j, path);
    Assertion a;
    a.metric = r.text("metric");
    if (r.has("min"))
        a.min = r.number("min");
    if (r.has("max"))
        a.max = r.number("max");
    r.finish();
    if (a.metric.empty())
        throw config_error(join(path, "metric"), "must not be empty");
    if (!a.min && !a.max)
        throw config_error(path, "needs min, max or both");
    if (a.min && a.max && *a.min > *a.max)
        throw config_error(path, "min exceeds max");
    return a;
}

const Grid& spec_grid(const ExperimentSpec& s)
{
    return s.kind == ExperimentKind::eit_run ? s.eit.grid : s.gem.grid;
}

void validate_semantics(const ExperimentSpec& s)
{
    const Grid& grid = spec_grid(s);
    const auto& allowed =
        s.kind == ExperimentKind::eit_run ? eit_analyses : gem_analyses;
    for (std::size_t i = 0; i < s.analysis.size(); ++i) {
        if (!allowed.count(s.analysis[i]))
            throw config_error("analysis[" + std::to_string(i) + "]",
                               "unknown analysis '" + s.analysis[i] +
                                   "' for kind " + to_string(s.kind));
    }
    if (s.options.input_window)
        check_window(*s.options.input_window, grid, "analysis_options.input_window");
    if (s.options.echo_window)
        check_window(*s.options.echo_window, grid, "analysis_options.echo_window");
    if (s.wants("kspace"))
        check_window(s.options.storage_window, grid,
                     "analysis_options.storage_window");
    if (s.wants("freeze"))
        check_window(s.options.freeze_window, grid,
                     "analysis_options.freeze_window");
    if ((s.wants("kspace") || s.wants("freeze")) && s.record.history_stride == 0)
        throw config_error("record.history_stride",
                           "stored rows are needed for this analysis");
    for (double t : s.record.snapshot_times) {
        if (t < 0.0 || t > grid.t_max)
            throw config_error("record.snapshot_times", "time outside the grid");
    }
    if (s.options.profile_time < 0.0 || s.options.profile_time > grid.t_max)
        throw config_error("analysis_options.profile_time", "time outside the grid");

    const bool sweep_kind = s.kind == ExperimentKind::fidelity_sweep ||
                            s.kind == ExperimentKind::delta_search;
    if (!sweep_kind)
        return;
    const double band_mhz = s.gem.bandwidth() / (2.0 * std::numbers::pi);
    const double ts = s.gem.stark.switch_time;
    auto check_interval = [&](Interval w, const std::string& path) {
        check_window(w, grid, path);
        if (w.end > ts)
            throw config_error(path, "interval must end before switch_time");
        if (count_modes(w.length(), band_mhz) < 1)
            throw config_error(path, "interval holds no in-band mode");
    };
    for (std::size_t i = 0; i < s.sweep.intervals.size(); ++i)
        check_interval(s.sweep.intervals[i],
                       "sweep.intervals[" + std::to_string(i) + "]");
    if (s.sweep.repair_interval)
        check_interval(*s.sweep.repair_interval, "sweep.repair_interval");
    if (s.kind == ExperimentKind::fidelity_sweep && s.sweep.betas.empty())
        throw config_error("sweep.betas", "required for fidelity_sweep");
    const Interval probe_window = s.kind == ExperimentKind::delta_search
                                      ? s.sweep.intervals.front()
                                      : s.sweep.repair_interval.value_or(
                                            s.sweep.intervals.front());
    const auto band = in_band_modes(probe_window.length(), band_mhz);
    if (std::find(band.begin(), band.end(), s.sweep.probe_mode) == band.end())
        throw config_error("sweep.probe_mode", "probe mode is not in band");
    for (const auto& w : s.sweep.intervals) {
        const auto modes = in_band_modes(w.length(), band_mhz);
        for (long n : s.sweep.mode_list) {
            if (s.sweep.selection == ModeSelection::list &&
                std::find(modes.begin(), modes.end(), n) == modes.end())
                throw config_error("sweep.mode_list",
                                   "mode " + std::to_string(n) + " is not in band");
        }
    }
}

bool valid_name(const std::string& name)
{
    if (name.empty())
        return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
               c == '-' || c == '.';
    });
}

json interval_json(Interval w) { return json::array({w.begin, w.end}); }

json grid_json(const Grid& g)
{
    return {{"z_min", g.z_min}, {"z_max", g.z_max}, {"nz", g.nz},
            {"t_max", g.t_max}, {"nt", g.nt}};
}

} // namespace

const char* to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::gem_run: return "gem_run";
    case ExperimentKind::eit_run: return "eit_run";
    case ExperimentKind::fidelity_sweep: return "fidelity_sweep";
    case ExperimentKind::delta_search: return "delta_search";
    case ExperimentKind::kspace_report: return "kspace_report";
    }
    return "gem_run";
}

bool ExperimentSpec::wants(const std::string& analysis_name) const
{
    return std::find(analysis.begin(), analysis.end(), analysis_name) !=
           analysis.end();
}

ExperimentSpec parse_spec(const std::string& text, const std::string& source)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error("", source + ": JSON parse error: " + e.what());
    }
    Reader r(doc, "");
    ExperimentSpec s;
    s.name = r.text("name");
    if (!valid_name(s.name))
        throw config_error("name", "use letters, digits, '_', '-' or '.'");
    s.kind = read_kind(r.text("kind"), "kind");
    if (s.kind == ExperimentKind::eit_run)
        s.eit = read_eit_config(r.at("config"), "config");
    else
        s.gem = read_gem_config(r.at("config"), "config");

    const bool sweep_kind = s.kind == ExperimentKind::fidelity_sweep ||
                            s.kind == ExperimentKind::delta_search;
    if (!sweep_kind)
        s.pulse = read_pulse(r.at("pulse"), "pulse");
    else if (r.has("pulse"))
        throw config_error("pulse", std::string("not used by kind ") +
                                        to_string(s.kind));
    if (sweep_kind)
        s.sweep = read_sweep(r.at("sweep"), "sweep");
    else if (r.has("sweep"))
        throw config_error("sweep", std::string("not used by kind ") +
                                        to_string(s.kind));

    if (r.has("analysis")) {
        const json& list = r.at("analysis");
        if (!list.is_array())
            throw config_error("analysis", "expected a list of names");
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!list[i].is_string())
                throw config_error("analysis[" + std::to_string(i) + "]",
                                   "expected a string");
            s.analysis.push_back(list[i].get<std::string>());
        }
    }
    if (s.kind == ExperimentKind::kspace_report && !s.wants("kspace"))
        s.analysis.push_back("kspace");
    if (r.has("analysis_options"))
        s.options = read_options(r.at("analysis_options"), "analysis_options");
    if (r.has("record"))
        s.record = read_record(r.at("record"), "record");
    s.output_dir = r.text("output_dir", s.name);
    if (s.output_dir.empty() ||
        std::filesystem::path(s.output_dir).is_absolute())
        throw config_error("output_dir", "must be a relative path");
    s.dump_fields = r.flag("dump_fields", false);
    if (r.has("assertions")) {
        const json& list = r.at("assertions");
        if (!list.is_array())
            throw config_error("assertions", "expected a list");
        for (std::size_t i = 0; i < list.size(); ++i)
            s.assertions.push_back(read_assertion(
                list[i], "assertions[" + std::to_string(i) + "]"));
    }
    r.finish();
    validate_semantics(s);
    return s;
}

ExperimentSpec load_spec(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("", "cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_spec(text.str(), path.string());
}

std::string emit_spec(const ExperimentSpec& s)
{
    json doc;
    doc["name"] = s.name;
    doc["kind"] = to_string(s.kind);
    if (s.kind == ExperimentKind::eit_run) {
        const auto& c = s.eit;
        doc["config"] = {{"n_atoms", c.n_atoms},   {"g", c.g},
                         {"omega_c0", c.omega_c0}, {"switch_down", c.switch_down},
                         {"switch_up", c.switch_up}, {"ramp_tau", c.ramp_tau},
                         {"gamma_e", c.gamma_e},   {"time_unit_us", c.time_unit_us},
                         {"grid", grid_json(c.grid)}};
    } else {
        const auto& c = s.gem;
        json stark = {{"eta0", c.stark.eta0},
                      {"switch_time", c.stark.switch_time},
                      {"ramp_tau", c.stark.ramp_tau},
                      {"delta_offset", c.stark.delta_offset}};
        if (!c.stark.freeze_intervals.empty()) {
            stark["freeze_intervals"] = json::array();
            for (auto w : c.stark.freeze_intervals)
                stark["freeze_intervals"].push_back(interval_json(w));
        }
        doc["config"] = {{"g", c.g},
                         {"linear_density", c.linear_density},
                         {"gamma", c.gamma},
                         {"stark", stark},
                         {"grid", grid_json(c.grid)}};
    }
    const bool sweep_kind = s.kind == ExperimentKind::fidelity_sweep ||
                            s.kind == ExperimentKind::delta_search;
    if (!sweep_kind) {
        const auto& p = s.pulse;
        json pulse = {{"kind", pulse_kind_name(p.kind)},
                      {"amplitude", json::array({p.amplitude.real(),
                                                 p.amplitude.imag()})}};
        if (p.kind == PulseKind::plane_wave_window) {
            pulse["mode_index"] = p.mode_index;
            pulse["window"] = interval_json(p.window);
        } else {
            pulse["center"] = p.center;
            pulse["width"] = p.width;
            if (p.kind == PulseKind::modulated) {
                pulse["mod_freq"] = p.mod_freq;
                pulse["mod_depth"] = p.mod_depth;
            }
        }
        doc["pulse"] = pulse;
    } else {
        const auto& w = s.sweep;
        json sweep;
        sweep["intervals"] = json::array();
        for (auto i : w.intervals)
            sweep["intervals"].push_back(interval_json(i));
        sweep["betas"] = w.betas;
        sweep["modes"] = w.selection == ModeSelection::all          ? "all"
                         : w.selection == ModeSelection::stratified ? "stratified"
                                                                    : "list";
        sweep["stratified_count"] = w.stratified_count;
        if (!w.mode_list.empty())
            sweep["mode_list"] = w.mode_list;
        sweep["batch_size"] = w.batch_size;
        sweep["probe_mode"] = w.probe_mode;
        if (w.repair_interval)
            sweep["repair_interval"] = interval_json(*w.repair_interval);
        if (!w.repair_betas.empty())
            sweep["repair_betas"] = w.repair_betas;
        doc["sweep"] = sweep;
    }
    doc["analysis"] = s.analysis;
    json options = {{"storage_window", interval_json(s.options.storage_window)},
                    {"freeze_window", interval_json(s.options.freeze_window)},
                    {"taper_fraction", s.options.taper_fraction},
                    {"profile_time", s.options.profile_time}};
    if (s.options.input_window)
        options["input_window"] = interval_json(*s.options.input_window);
    if (s.options.echo_window)
        options["echo_window"] = interval_json(*s.options.echo_window);
    doc["analysis_options"] = options;
    doc["record"] = {{"history_stride", s.record.history_stride},
                     {"snapshot_times", s.record.snapshot_times},
                     {"map_z_stride", s.record.map_z_stride}};
    doc["output_dir"] = s.output_dir;
    doc["dump_fields"] = s.dump_fields;
    doc["assertions"] = json::array();
    for (const auto& a : s.assertions) {
        json item = {{"metric", a.metric}};
        if (a.min)
            item["min"] = *a.min;
        if (a.max)
            item["max"] = *a.max;
        doc["assertions"].push_back(item);
    }
    return doc.dump(2) + "\n";
}

std::vector<long> stratified_modes(const std::vector<long>& in_band,
                                   std::size_t count)
{
    if (in_band.empty())
        return {};
    std::vector<long> out{in_band.front(), in_band.back()};
    const std::size_t n = in_band.size();
    for (std::size_t i = 0; i < count; ++i) {
        // Midpoints of `count` equal strata.
        const std::size_t k = (2 * i + 1) * n / (2 * count);
        out.push_back(in_band[std::min(k, n - 1)]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<long> sweep_modes(const SweepSpec& sweep, Interval interval,
                              double bandwidth_mhz)
{
    const auto band = in_band_modes(interval.length(), bandwidth_mhz);
    switch (sweep.selection) {
    case ModeSelection::all: return band;
    case ModeSelection::stratified:
        return stratified_modes(band, sweep.stratified_count);
    case ModeSelection::list: return sweep.mode_list;
    }
    return band;
}

} // namespace gem::runner
