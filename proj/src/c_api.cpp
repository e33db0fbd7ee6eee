#include "declutter/declutter.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>
#include <thread>

#include "declutter/error.hpp"
#include "declutter/harness.hpp"
#include "declutter/scene_io.hpp"

struct dc_config {
    declutter::Config cfg;
};

struct dc_scene {
    declutter::SceneState state;
};

struct dc_trial {
    declutter::TrialReport report;
    std::vector<declutter::TraceEvent> events;
};

namespace {

thread_local std::string g_last_error;

dc_status code_of(declutter::ErrorCode c) {
    using declutter::ErrorCode;
    switch (c) {
        case ErrorCode::InvalidArgument: return DC_ERR_INVALID_ARGUMENT;
        case ErrorCode::PlacementExhausted: return DC_ERR_PLACEMENT_EXHAUSTED;
        case ErrorCode::InfeasibleAction: return DC_ERR_INFEASIBLE_ACTION;
        case ErrorCode::EmptyTrace: return DC_ERR_EMPTY_TRACE;
        case ErrorCode::MissingBaseline: return DC_ERR_MISSING_BASELINE;
        case ErrorCode::SchemaError: return DC_ERR_SCHEMA;
        case ErrorCode::IoError: return DC_ERR_IO;
    }
    return DC_ERR_INTERNAL;
}

dc_status fail(dc_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

template <class Fn>
dc_status guarded(Fn fn) {
    try {
        g_last_error.clear();
        fn();
        return DC_OK;
    } catch (const declutter::Error& e) {
        return fail(code_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(DC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DC_ERR_INTERNAL, e.what());
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void need(bool ok, const char* what) {
    if (!ok) throw declutter::Error(declutter::ErrorCode::InvalidArgument, what);
}

}  // namespace

extern "C" {

const char* dc_version(void) { return "1.0.0"; }

const char* dc_last_error_message(void) { return g_last_error.c_str(); }

const char* dc_status_name(dc_status s) {
    switch (s) {
        case DC_OK: return "ok";
        case DC_ERR_INVALID_ARGUMENT: return "invalid argument";
        case DC_ERR_PLACEMENT_EXHAUSTED: return "placement exhausted";
        case DC_ERR_INFEASIBLE_ACTION: return "infeasible action";
        case DC_ERR_EMPTY_TRACE: return "empty trace";
        case DC_ERR_MISSING_BASELINE: return "missing baseline";
        case DC_ERR_SCHEMA: return "schema error";
        case DC_ERR_IO: return "i/o error";
        case DC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void dc_string_free(char* s) { std::free(s); }

dc_status dc_config_default(dc_config** out) {
    return guarded([&] {
        need(out, "out is null");
        *out = new dc_config{};
    });
}

dc_status dc_config_load(const char* path, dc_config** out) {
    return guarded([&] {
        need(out, "out is null");
        if (path) {
            *out = new dc_config{declutter::load_config(path)};
            return;
        }
        const std::string p = declutter::default_config_path();
        // A missing default file is fine; an explicitly named one is not.
        const bool from_env = std::getenv("DECLUTTER_CONFIG") && *std::getenv("DECLUTTER_CONFIG");
        if (!from_env && !std::filesystem::exists(p)) {
            *out = new dc_config{};
            return;
        }
        *out = new dc_config{declutter::load_config(p)};
    });
}

dc_status dc_config_from_json(const char* text, dc_config** out) {
    return guarded([&] {
        need(text && out, "null argument");
        *out = new dc_config{declutter::config_from_json(text)};
    });
}

dc_status dc_config_to_json(const dc_config* cfg, char** out) {
    return guarded([&] {
        need(cfg && out, "null argument");
        *out = dup(declutter::config_to_json(cfg->cfg));
    });
}

void dc_config_free(dc_config* cfg) { delete cfg; }

dc_status dc_scene_generate(const dc_config* cfg, const char* tier, uint64_t seed, uint64_t index, dc_scene** out) {
    return guarded([&] {
        need(cfg && tier && out, "null argument");
        auto t = declutter::parse_tier(tier);
        need(t.has_value(), "unknown tier");
        *out = new dc_scene{declutter::corpus_scene(cfg->cfg, *t, seed, index)};
    });
}

dc_status dc_scene_from_json(const dc_config* cfg, const char* text, dc_scene** out) {
    return guarded([&] {
        need(cfg && text && out, "null argument");
        *out = new dc_scene{declutter::scene_from_json(text, cfg->cfg.sim.dishes)};
    });
}

dc_status dc_scene_to_json(const dc_scene* scene, char** out) {
    return guarded([&] {
        need(scene && out, "null argument");
        *out = dup(declutter::scene_to_json(scene->state));
    });
}

dc_status dc_scene_dish_count(const dc_scene* scene, size_t* out) {
    return guarded([&] {
        need(scene && out, "null argument");
        *out = scene->state.dish_count();
    });
}

dc_status dc_scene_stack_count(const dc_scene* scene, size_t* out) {
    return guarded([&] {
        need(scene && out, "null argument");
        *out = scene->state.stacks.size();
    });
}

dc_status dc_scene_tier(const dc_scene* scene, char** out) {
    return guarded([&] {
        need(scene && out, "null argument");
        *out = dup(std::string(declutter::to_string(scene->state.tier)));
    });
}

dc_status dc_scene_seed(const dc_scene* scene, uint64_t* out) {
    return guarded([&] {
        need(scene && out, "null argument");
        *out = scene->state.seed;
    });
}

void dc_scene_free(dc_scene* scene) { delete scene; }

dc_status dc_trial_run(const dc_config* cfg, const dc_scene* scene, const char* policy, uint64_t seed, double p_fail,
                       dc_trial** out) {
    return guarded([&] {
        need(cfg && scene && policy && out, "null argument");
        auto kind = declutter::parse_policy(policy);
        need(kind.has_value(), "policy must be random, pull or stack");
        need(p_fail <= 1.0, "p_fail must not exceed 1");
        const double pf = p_fail < 0.0 ? cfg->cfg.p_fail : p_fail;
        const auto& s = scene->state;
        const auto trace = declutter::run_policy(s, cfg->cfg.policy(*kind), cfg->cfg.sim,
                                                 declutter::derive_seed({s.seed, seed, static_cast<uint64_t>(*kind)}),
                                                 declutter::RunOptions{pf, 0});
        const std::string id = std::string(declutter::to_string(s.tier)) + "_" + std::to_string(s.seed);
        *out = new dc_trial{declutter::make_report(id, s.tier, *kind, trace, cfg->cfg.time_model), trace.events};
    });
}

dc_status dc_trial_trips(const dc_trial* t, int* out) {
    return guarded([&] {
        need(t && out, "null argument");
        *out = t->report.trips;
    });
}

dc_status dc_trial_objects(const dc_trial* t, int* out) {
    return guarded([&] {
        need(t && out, "null argument");
        *out = t->report.objects_cleared;
    });
}

dc_status dc_trial_failures(const dc_trial* t, int* out) {
    return guarded([&] {
        need(t && out, "null argument");
        *out = t->report.failures;
    });
}

dc_status dc_trial_opt(const dc_trial* t, double* out) {
    return guarded([&] {
        need(t && out, "null argument");
        *out = t->report.opt;
    });
}

dc_status dc_trial_time(const dc_trial* t, double* out) {
    return guarded([&] {
        need(t && out, "null argument");
        *out = t->report.time_s;
    });
}

dc_status dc_trial_report_json(const dc_trial* t, char** out) {
    return guarded([&] {
        need(t && out, "null argument");
        *out = dup(declutter::report_to_json(t->report));
    });
}

dc_status dc_trial_trace_jsonl(const dc_trial* t, char** out) {
    return guarded([&] {
        need(t && out, "null argument");
        *out = dup(declutter::trace_to_jsonl(t->events));
    });
}

void dc_trial_free(dc_trial* trial) { delete trial; }

dc_status dc_bench_run(const dc_config* cfg, const char* plan_json, const char* out_dir, char** summary,
                       char** errors) {
    return guarded([&] {
        need(cfg && plan_json && out_dir, "null argument");
        const auto plan = declutter::plan_from_json(plan_json, cfg->cfg);
        const auto result = declutter::run_bench(plan, cfg->cfg);
        declutter::write_bench(result, out_dir);
        std::string errs;
        for (const auto& e : result.errors) errs += e + "\n";
        if (summary) *summary = dup(declutter::summary_csv(result.summary));
        if (errors) *errors = dup(errs);
    });
}

dc_status dc_fit_time(const dc_config* cfg, const char* table_path, int scenes, uint64_t seed, unsigned threads,
                      char** fragment, double* rms) {
    return guarded([&] {
        need(cfg && table_path && fragment, "null argument");
        need(scenes >= 1, "scenes must be at least 1");
        const auto rows = declutter::read_reference_table(table_path);
        const auto rep = declutter::fit_time_to_reference(cfg->cfg, rows, scenes, seed, threads ? threads : std::max(1u, std::thread::hardware_concurrency()));
        *fragment = dup(declutter::time_fit_fragment(rep));
        if (rms) *rms = rep.fit.relative_rms;
    });
}

}  // extern "C"
