#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gem/errors.hpp"
#include "gem/parallel.hpp"
#include "runner/artifacts.hpp"
#include "runner/experiment.hpp"
#include "runner/spec.hpp"

using namespace gem;
using namespace gem::runner;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json preset_json(const std::string& name)
{
    return json::parse(read_file(find_preset(name)));
}

std::string error_path(const std::string& text)
{
    try {
        parse_spec(text);
    } catch (const config_error& e) {
        return e.path();
    }
    return "<no error>";
}

/// Small GEM run: 100 us window, switch at 40 us.
json small_spec()
{
    return json::parse(R"({
      "name": "small",
      "kind": "gem_run",
      "config": {
        "g": 1.0, "linear_density": 16.755160819145562, "gamma": 0.0,
        "stark": {"eta0": 8.377580409572781, "switch_time": 40.0, "ramp_tau": 0.0},
        "grid": {"z_min": -3.0, "z_max": 3.0, "nz": 1700, "t_max": 100.0, "nt": 4001}
      },
      "pulse": {"kind": "gaussian", "amplitude": 1.0, "center": 5.0, "width": 1.5},
      "analysis": ["efficiency", "fidelity", "echo_peak", "energy_balance"],
      "assertions": [{"metric": "sigma_error", "max": 0.02}]
    })");
}

struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("gem_test_" + tag))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_SUITE("cli_runner")
{
    TEST_CASE("shipped presets load")
    {
        const auto names = list_presets();
        CHECK(names == std::vector<std::string>{"fig2_abrupt", "fig2_tanh", "fig3_eit",
                                                "fig3_gem", "fig4_sweep"});
        for (const auto& n : names)
            CHECK_NOTHROW(load_spec(find_preset(n)));

        const auto s = load_spec(find_preset("fig2_abrupt"));
        CHECK(s.kind == ExperimentKind::kspace_report);
        CHECK(s.gem.optical_depth() == doctest::Approx(3.3).epsilon(1e-12));
        CHECK(s.gem.stark.switch_time == 80.0);
        CHECK(s.gem.stark.ramp_tau == 0.0);
        CHECK(load_spec(find_preset("fig2_tanh")).gem.stark.ramp_tau == 58.0);
        CHECK(s.output_dir == "fig2_abrupt");
        CHECK_THROWS_AS(find_preset("fig9"), std::invalid_argument);
    }

    TEST_CASE("unknown keys are rejected with their path")
    {
        auto j = preset_json("fig2_abrupt");
        j["config"]["stark"]["etaa0"] = 1.0;
        const auto path = error_path(j.dump());
        CHECK(path == "config.stark.etaa0");

        j = preset_json("fig2_abrupt");
        j["colour"] = "red";
        CHECK(error_path(j.dump()) == "colour");

        j = preset_json("fig4_sweep");
        j["sweep"]["mode"] = "all";
        CHECK(error_path(j.dump()) == "sweep.mode");
    }

    TEST_CASE("invariant violations name the field")
    {
        auto j = preset_json("fig2_abrupt");
        j["config"]["grid"]["nz"] = 1000;
        try {
            parse_spec(j.dump());
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(e.path() == "config.grid.nz");
            CHECK(std::string(e.what()).find("Nyquist guard") != std::string::npos);
            CHECK(std::string(e.what()).find("ceil(eta_max * L * t_max / pi) + 2") !=
                  std::string::npos);
        }

        j = preset_json("fig2_abrupt");
        j["pulse"]["width"] = -1.5;
        CHECK(error_path(j.dump()) == "pulse.width");

        j = preset_json("fig2_abrupt");
        j["config"]["grid"].erase("nt");
        CHECK(error_path(j.dump()) == "config.grid.nt");

        j = preset_json("fig2_abrupt");
        j["config"]["g"] = "one";
        CHECK(error_path(j.dump()) == "config.g");

        j = preset_json("fig2_abrupt");
        j["kind"] = "photon_run";
        CHECK(error_path(j.dump()) == "kind");

        j = preset_json("fig2_abrupt");
        j["analysis"].push_back("entropy");
        CHECK(error_path(j.dump()).starts_with("analysis["));

        j = preset_json("fig2_abrupt");
        j["record"].erase("history_stride");
        CHECK(error_path(j.dump()) == "record.history_stride");

        j = preset_json("fig4_sweep");
        j["sweep"]["intervals"] = json::array({json::array({190.0, 210.0})});
        CHECK(error_path(j.dump()).starts_with("sweep.intervals"));

        j = preset_json("fig4_sweep");
        j["sweep"]["probe_mode"] = 500;
        CHECK(error_path(j.dump()) == "sweep.probe_mode");

        CHECK_THROWS_AS(parse_spec("{ not json"), config_error);
        CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), std::exception);
    }

    TEST_CASE("emitted specs parse back to the same spec")
    {
        for (const auto& name : list_presets()) {
            const auto s = load_spec(find_preset(name));
            const auto text = emit_spec(s);
            CHECK(emit_spec(parse_spec(text)) == text);
        }
        const auto s = parse_spec(small_spec().dump());
        CHECK(s.gem.linear_density == 16.755160819145562);
        CHECK(parse_spec(emit_spec(s)).gem.linear_density == s.gem.linear_density);
    }

    TEST_CASE("mode selection")
    {
        const auto band = in_band_modes(10.0, 8.0);
        const auto st = stratified_modes(band, 16);
        CHECK(st.size() == 18);
        CHECK(st.front() == -40);
        CHECK(st.back() == 39);
        CHECK(std::is_sorted(st.begin(), st.end()));
        CHECK(stratified_modes(band, 200).size() == 80);

        SweepSpec sw;
        sw.selection = ModeSelection::all;
        CHECK(sweep_modes(sw, {35.0, 45.0}, 8.0).size() == 80);
        CHECK(sweep_modes(sw, {10.0, 70.0}, 8.0).size() == 480);
        sw.selection = ModeSelection::list;
        sw.mode_list = {3, -2};
        CHECK(sweep_modes(sw, {35.0, 45.0}, 8.0) == std::vector<long>{3, -2});
        CHECK(sweep_key("min_F", {35.0, 45.0}, 0.75) == "min_F@35-45@beta=0.75");
    }

    TEST_CASE("artifact formatting and checksums")
    {
        CHECK(format_number(0.1) == "1.0000000000000001e-01");
        CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
        CHECK(format_number(-2.5e-300) == "-2.5000000000000000e-300");

        TempDir tmp("artifacts");
        ArtifactSet set(tmp.path);
        set.write_text("abc.txt", "abc");
        CHECK(sha256_file(tmp.path / "abc.txt") ==
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        const std::vector<SweepRow> rows{{0.75, -3, {0.5, 0.6, 0.7, 80.0, 0.0, 1.0}}};
        set.write_sweep("s.csv", rows);
        const auto text = read_file(tmp.path / "s.csv");
        CHECK(text.starts_with("beta,mode_n,sigma,fidelity,shape,tau_us,delta\n"));
        CHECK(text.find("7.5000000000000000e-01,-3,5.0000000000000000e-01") !=
              std::string::npos);
        CHECK(set.files() == std::vector<std::string>{"abc.txt", "s.csv"});
    }

    TEST_CASE("runs write a manifest and reproduce byte for byte")
    {
        TempDir a("run_a"), b("run_b");
        const auto spec = parse_spec(small_spec().dump());
        const auto ra = run_experiment(spec, {.out_root = a.path});
        const auto rb = run_experiment(spec, {.out_root = b.path, .dump_fields = false});
        CHECK(ra.passed());
        CHECK(ra.exit_code() == 0);
        CHECK(ra.scalars.at("sigma_error") < 0.02);
        CHECK(ra.scalars.at("energy_balance_error") < 0.01);

        const auto ma = json::parse(read_file(a.path / "small" / "manifest.json"));
        CHECK(ma["complete"] == true);
        CHECK(ma["passed"] == true);
        CHECK(ma["spec"]["name"] == "small");
        REQUIRE(ma["files"].size() >= 1);
        for (const auto& f : ma["files"]) {
            const std::string name = f["name"];
            CHECK(sha256_file(a.path / "small" / name) == f["sha256"]);
            CHECK(read_file(a.path / "small" / name) ==
                  read_file(b.path / "small" / name));
        }
        CHECK(read_file(a.path / "small" / "manifest.json") ==
              read_file(b.path / "small" / "manifest.json"));
        const auto series = read_file(a.path / "small" / "series.csv");
        CHECK(series.starts_with("t_us,re_in,im_in,re_out,im_out\n"));
    }

    TEST_CASE("failed assertions and convergence give a nonzero exit")
    {
        TempDir tmp("fail");
        auto j = small_spec();
        j["assertions"] = json::array({{{"metric", "sigma"}, {"min", 1.5}},
                                       {{"metric", "no_such_metric"}, {"max", 1.0}}});
        auto r = run_experiment(parse_spec(j.dump()), {.out_root = tmp.path});
        CHECK_FALSE(r.passed());
        CHECK(r.exit_code() == 1);
        REQUIRE(r.assertions.size() == 2);
        CHECK_FALSE(r.assertions[0].passed);
        CHECK_FALSE(r.assertions[1].value.has_value());

        j = small_spec();
        j["config"]["grid"]["nt"] = 201;
        j["analysis"] = json::array({"efficiency", "convergence"});
        j["assertions"] = json::array();
        r = run_experiment(parse_spec(j.dump()), {.out_root = tmp.path});
        CHECK(r.scalars.at("convergence_change") > convergence_tolerance);
        CHECK_FALSE(r.failures.empty());
        CHECK(r.exit_code() == 1);
    }

    TEST_CASE("sweep output does not depend on the worker count")
    {
        TempDir a("sweep_1"), b("sweep_3");
        auto j = small_spec();
        j["kind"] = "fidelity_sweep";
        j.erase("pulse");
        j["analysis"] = json::array();
        j["assertions"] = json::array();
        j["sweep"] = {{"intervals", json::array({json::array({10.0, 20.0})})},
                      {"betas", json::array({0.5, 1.0})},
                      {"modes", "list"},
                      {"mode_list", json::array({-40, -7, 0, 12, 39})},
                      {"batch_size", 2}};
        const auto spec = parse_spec(j.dump());
        run_experiment(spec, {.out_root = a.path, .workers = 1});
        run_experiment(spec, {.out_root = b.path, .workers = 3});
        const auto csv = read_file(a.path / "small" / "sweep_10-20.csv");
        CHECK(csv == read_file(b.path / "small" / "sweep_10-20.csv"));
        CHECK(read_file(a.path / "small" / "summary.json") ==
              read_file(b.path / "small" / "summary.json"));
        std::size_t lines = 0;
        for (char c : csv)
            lines += c == '\n';
        CHECK(lines == 1 + 2 * 5);
        const auto summary = json::parse(read_file(a.path / "small" / "summary.json"));
        CHECK(summary.dump().find("min_F") != std::string::npos);
    }

    TEST_CASE("unwritable output is rejected at validation")
    {
        auto spec = parse_spec(small_spec().dump());
        CHECK_THROWS_AS(check_output_writable(spec, "/proc/version/out"), config_error);
        TempDir tmp("writable");
        CHECK_NOTHROW(check_output_writable(spec, tmp.path / "new" / "nested"));
    }

    TEST_CASE("worker count comes from GEM_SIM_WORKERS")
    {
        ::setenv("GEM_SIM_WORKERS", "3", 1);
        CHECK(default_workers() == 3);
        ::setenv("GEM_SIM_WORKERS", "0", 1);
        CHECK(default_workers() == 1);
        ::setenv("GEM_SIM_WORKERS", "four", 1);
        CHECK(default_workers() == 1);
        ::unsetenv("GEM_SIM_WORKERS");
        CHECK(default_workers() == 1);
    }
}
