#ifndef DECLUTTER_H
#define DECLUTTER_H

/* C interface to the tabletop decluttering simulator. All handles are
 * opaque; every function returns a dc_status and reports details through
 * dc_last_error_message(). Strings returned through char** are owned by the
 * caller and released with dc_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DC_API __declspec(dllexport)
#else
#define DC_API __attribute__((visibility("default")))
#endif

typedef enum dc_status {
    DC_OK = 0,
    DC_ERR_INVALID_ARGUMENT = 1,
    DC_ERR_PLACEMENT_EXHAUSTED = 2,
    DC_ERR_INFEASIBLE_ACTION = 3,
    DC_ERR_EMPTY_TRACE = 4,
    DC_ERR_MISSING_BASELINE = 5,
    DC_ERR_SCHEMA = 6,
    DC_ERR_IO = 7,
    DC_ERR_INTERNAL = 8
} dc_status;

typedef struct dc_config dc_config;
typedef struct dc_scene dc_scene;
typedef struct dc_trial dc_trial;

DC_API const char* dc_version(void);

/* Message of the last failing call on this thread; "" if none. */
DC_API const char* dc_last_error_message(void);
DC_API const char* dc_status_name(dc_status status);
DC_API void dc_string_free(char* s);

/* Configuration */
DC_API dc_status dc_config_default(dc_config** out);
/* path == NULL uses $DECLUTTER_CONFIG or config/declutter.json, falling
 * back to built-in defaults when that default file does not exist. */
DC_API dc_status dc_config_load(const char* path, dc_config** out);
DC_API dc_status dc_config_from_json(const char* text, dc_config** out);
DC_API dc_status dc_config_to_json(const dc_config* cfg, char** out);
DC_API void dc_config_free(dc_config* cfg);

/* Scenes. Scene k of a corpus uses a seed derived from (seed, tier, k). */
DC_API dc_status dc_scene_generate(const dc_config* cfg, const char* tier, uint64_t seed, uint64_t index,
                                   dc_scene** out);
DC_API dc_status dc_scene_from_json(const dc_config* cfg, const char* text, dc_scene** out);
DC_API dc_status dc_scene_to_json(const dc_scene* scene, char** out);
DC_API dc_status dc_scene_dish_count(const dc_scene* scene, size_t* out);
DC_API dc_status dc_scene_stack_count(const dc_scene* scene, size_t* out);
DC_API dc_status dc_scene_tier(const dc_scene* scene, char** out);
DC_API dc_status dc_scene_seed(const dc_scene* scene, uint64_t* out);
DC_API void dc_scene_free(dc_scene* scene);

/* Trials. p_fail < 0 takes the configured failure probability. */
DC_API dc_status dc_trial_run(const dc_config* cfg, const dc_scene* scene, const char* policy, uint64_t seed,
                              double p_fail, dc_trial** out);
DC_API dc_status dc_trial_trips(const dc_trial* trial, int* out);
DC_API dc_status dc_trial_objects(const dc_trial* trial, int* out);
DC_API dc_status dc_trial_failures(const dc_trial* trial, int* out);
DC_API dc_status dc_trial_opt(const dc_trial* trial, double* out);
DC_API dc_status dc_trial_time(const dc_trial* trial, double* out);
DC_API dc_status dc_trial_report_json(const dc_trial* trial, char** out);
DC_API dc_status dc_trial_trace_jsonl(const dc_trial* trial, char** out);
DC_API void dc_trial_free(dc_trial* trial);

/* Batch runs. Writes summary CSVs and trials.jsonl into out_dir; *summary
 * receives the main CSV and *errors one line per broken trial. */
DC_API dc_status dc_bench_run(const dc_config* cfg, const char* plan_json, const char* out_dir, char** summary,
                              char** errors);

/* Fits the time model to a reference table CSV; *fragment receives a
 * config fragment and *rms the relative RMS residual. */
DC_API dc_status dc_fit_time(const dc_config* cfg, const char* table_path, int scenes, uint64_t seed,
                             unsigned threads, char** fragment, double* rms);

#ifdef __cplusplus
}
#endif

#endif /* DECLUTTER_H */
