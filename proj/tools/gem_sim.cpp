#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gem/errors.hpp"
#include "gem/parallel.hpp"
#include "runner/experiment.hpp"
#include "runner/spec.hpp"

namespace {

using namespace gem::runner;

enum Exit
{
    exit_ok = 0,
    exit_assertion = 1,
    exit_spec = 2,
    exit_usage = 64
};

int run_spec(const ExperimentSpec& spec, const RunOptions& options)
{
    check_output_writable(spec, options.out_root);
    const auto res = run_experiment(spec, options);
    for (const auto& [key, value] : res.scalars)
        std::printf("%s = %.10g\n", key.c_str(), value);
    for (const auto& a : res.assertions) {
        std::printf("[%s] %s", a.passed ? "PASS" : "FAIL",
                    a.assertion.metric.c_str());
        if (a.value)
            std::printf(" = %.10g", *a.value);
        else
            std::printf(" (not produced)");
        if (a.assertion.min)
            std::printf(" min %.10g", *a.assertion.min);
        if (a.assertion.max)
            std::printf(" max %.10g", *a.assertion.max);
        std::printf("\n");
    }
    for (const auto& f : res.failures)
        std::printf("[FAIL] %s\n", f.c_str());
    if (!res.complete)
        std::printf("[FAIL] run incomplete: %s\n", res.error.c_str());
    std::printf("artifacts: %s\n", res.dir.string().c_str());
    return res.exit_code();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gradient echo memory simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    RunOptions options;
    std::size_t workers = gem::default_workers();
    std::string out_dir = ".";
    app.add_option("--workers", workers,
                   "Worker threads for sweeps (default: GEM_SIM_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--dump-fields", options.dump_fields,
                 "Write field and k-space magnitude maps");
    app.add_option("--out", out_dir, "Root directory for artifacts");

    std::string spec_path;
    auto* run = app.add_subcommand("run", "Run an experiment spec");
    run->add_option("spec", spec_path, "Spec JSON file")->required();

    auto* validate = app.add_subcommand("validate", "Check a spec without running it");
    validate->add_option("spec", spec_path, "Spec JSON file")->required();

    auto* presets = app.add_subcommand("presets", "Shipped experiment presets");
    presets->require_subcommand(1);
    presets->fallthrough();
    auto* list = presets->add_subcommand("list", "List preset names");
    std::string preset_name;
    auto* preset_run = presets->add_subcommand("run", "Run a preset");
    preset_run->add_option("name", preset_name, "Preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }
    options.workers = workers;
    options.out_root = out_dir;

    try {
        if (*list) {
            for (const auto& name : list_presets())
                std::printf("%s\n", name.c_str());
            return exit_ok;
        }
        if (*validate) {
            const auto spec = load_spec(spec_path);
            check_output_writable(spec, options.out_root);
            std::printf("%s: valid %s spec\n", spec.name.c_str(),
                        to_string(spec.kind));
            return exit_ok;
        }
        if (*run)
            return run_spec(load_spec(spec_path), options);
        if (*preset_run)
            return run_spec(load_spec(find_preset(preset_name)), options);
    } catch (const gem::config_error& e) {
        std::fprintf(stderr, "invalid spec: %s\n", e.what());
        return exit_spec;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_spec;
    }
    return exit_usage;
}
