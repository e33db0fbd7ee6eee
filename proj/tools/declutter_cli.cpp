// declutter: scene generation, single trials, batch benches and the
// time-model fit, all through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "declutter/declutter.h"

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kSchema = 3, kInfeasible = 4 };

int exit_code(dc_status s) {
    switch (s) {
        case DC_OK: return kOk;
        case DC_ERR_INVALID_ARGUMENT: return kUsage;
        case DC_ERR_SCHEMA: return kSchema;
        case DC_ERR_INFEASIBLE_ACTION: return kInfeasible;
        default: return kFailure;
    }
}

struct Failed {
    int code;
};

void check(dc_status s, const std::string& context) {
    if (s == DC_OK) return;
    std::cerr << "declutter: " << context << ": " << dc_last_error_message() << " (" << dc_status_name(s) << ")\n";
    throw Failed{exit_code(s)};
}

// Owns a char* handed out by the library.
struct Text {
    char* p = nullptr;
    ~Text() { dc_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    ~Handle() { Free(p); }
};
using Config = Handle<dc_config, dc_config_free>;
using Scene = Handle<dc_scene, dc_scene_free>;
using Trial = Handle<dc_trial, dc_trial_free>;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "declutter: cannot read " << path << "\n";
        throw Failed{kFailure};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
        std::cerr << "declutter: cannot write " << path << "\n";
        throw Failed{kFailure};
    }
}

void load_config(const std::string& path, Config& cfg) {
    check(dc_config_load(path.empty() ? nullptr : path.c_str(), &cfg.p),
          "config " + (path.empty() ? std::string("(default)") : path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabletop decluttering simulator and benchmark harness"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Config JSON (default: $DECLUTTER_CONFIG or config/declutter.json)");

    auto* gen = app.add_subcommand("generate", "Write a seeded scene corpus");
    std::string gen_tier, gen_out;
    int gen_count = 1;
    std::uint64_t gen_seed = 0;
    gen->add_option("--tier", gen_tier, "T0Cups, T0Bowls, T0Utensils, T1 or T2")->required();
    gen->add_option("--count", gen_count, "Number of scenes")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Base seed");
    gen->add_option("--out", gen_out, "Output directory")->required();

    auto* run = app.add_subcommand("run", "Run one policy on one scene");
    std::string run_scene, run_policy, run_trace, run_report;
    std::uint64_t run_seed = 0;
    double run_pfail = -1.0;
    run->add_option("--scene", run_scene, "Scene JSON")->required();
    run->add_option("--policy", run_policy, "random, pull or stack")->required();
    run->add_option("--config", config_path, "Config JSON");
    run->add_option("--trace", run_trace, "Trace JSONL output");
    run->add_option("--report", run_report, "Report JSON output");
    run->add_option("--seed", run_seed, "Trial seed");
    run->add_option("--p-fail", run_pfail, "Failure probability (default: from config)");

    auto* bench = app.add_subcommand("bench", "Run an experiment plan");
    std::string bench_plan, bench_out;
    bench->add_option("--plan", bench_plan, "Plan JSON")->required();
    bench->add_option("--out", bench_out, "Output directory")->required();
    bench->add_option("--config", config_path, "Config JSON");

    auto* fit = app.add_subcommand("fit-time", "Fit the time model to a reference table");
    std::string fit_table, fit_out;
    int fit_scenes = 200;
    std::uint64_t fit_seed = 0;
    unsigned fit_threads = 0;
    fit->add_option("--table", fit_table, "CSV: tier,policy,time_s,opt,failures")->required();
    fit->add_option("--out", fit_out, "Config fragment output")->required();
    fit->add_option("--scenes", fit_scenes, "Simulated scenes per row")->check(CLI::PositiveNumber);
    fit->add_option("--seed", fit_seed, "Base seed for simulated scenes");
    fit->add_option("--threads", fit_threads, "Worker threads (0: all cores)");
    fit->add_option("--config", config_path, "Config JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        Config cfg;
        load_config(config_path, cfg);

        if (*gen) {
            std::error_code ec;
            std::filesystem::create_directories(gen_out, ec);
            if (ec) {
                std::cerr << "declutter: cannot create " << gen_out << ": " << ec.message() << "\n";
                return kFailure;
            }
            for (int k = 0; k < gen_count; ++k) {
                Scene scene;
                check(dc_scene_generate(cfg.p, gen_tier.c_str(), gen_seed, static_cast<std::uint64_t>(k), &scene.p),
                      "generate " + gen_tier + " #" + std::to_string(k));
                Text json, tier;
                check(dc_scene_to_json(scene.p, &json.p), "serialize scene");
                check(dc_scene_tier(scene.p, &tier.p), "scene tier");
                const auto path = std::filesystem::path(gen_out) /
                                  ("scene_" + tier.str() + "_" + std::to_string(gen_seed) + "_" + std::to_string(k) +
                                   ".json");
                write_file(path.string(), json.str());
                std::cout << path.string() << "\n";
            }
        } else if (*run) {
            Scene scene;
            check(dc_scene_from_json(cfg.p, read_file(run_scene).c_str(), &scene.p), run_scene);
            Trial trial;
            check(dc_trial_run(cfg.p, scene.p, run_policy.c_str(), run_seed, run_pfail, &trial.p),
                  run_scene + " with policy " + run_policy);
            Text report, trace;
            check(dc_trial_report_json(trial.p, &report.p), "report");
            if (!run_trace.empty()) {
                check(dc_trial_trace_jsonl(trial.p, &trace.p), "trace");
                write_file(run_trace, trace.str());
            }
            if (!run_report.empty()) write_file(run_report, report.str() + "\n");
            int trips = 0, objects = 0, failures = 0;
            double opt = 0.0, time_s = 0.0;
            check(dc_trial_trips(trial.p, &trips), "trips");
            check(dc_trial_objects(trial.p, &objects), "objects");
            check(dc_trial_failures(trial.p, &failures), "failures");
            check(dc_trial_opt(trial.p, &opt), "opt");
            check(dc_trial_time(trial.p, &time_s), "time");
            std::printf("policy=%s trips=%d objects=%d opt=%.3f time_s=%.1f failures=%d\n", run_policy.c_str(), trips,
                        objects, opt, time_s, failures);
            std::printf("%s\n", report.str().c_str());
        } else if (*bench) {
            Text summary, errors;
            check(dc_bench_run(cfg.p, read_file(bench_plan).c_str(), bench_out.c_str(), &summary.p, &errors.p),
                  "bench " + bench_plan);
            std::cout << summary.str();
            if (!errors.str().empty()) {
                std::cerr << "declutter: some trials failed:\n" << errors.str();
                return kFailure;
            }
        } else if (*fit) {
            Text fragment;
            double rms = 0.0;
            check(dc_fit_time(cfg.p, fit_table.c_str(), fit_scenes, fit_seed, fit_threads, &fragment.p, &rms),
                  "fit-time " + fit_table);
            write_file(fit_out, fragment.str());
            std::printf("relative_rms=%.4f\n%s", rms, fragment.str().c_str());
        }
    } catch (const Failed& f) {
        return f.code;
    }
    return kOk;
}
