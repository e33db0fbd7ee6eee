#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "declutter/declutter.h"

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    dc_string_free(s);
    return out;
}

std::string data_path(const char* rel) {
    const char* root = std::getenv("DECLUTTER_TEST_DATA");
    return std::string(root ? root : ".") + "/" + rel;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(dc_version()) == "1.0.0");
    CHECK(std::string(dc_status_name(DC_OK)) == "ok");
    CHECK(std::string(dc_status_name(DC_ERR_SCHEMA)) == "schema error");
    CHECK(std::string(dc_status_name(static_cast<dc_status>(99))) == "unknown status");
}

TEST_CASE("config handles") {
    dc_config* cfg = nullptr;
    REQUIRE(dc_config_default(&cfg) == DC_OK);
    char* text = nullptr;
    REQUIRE(dc_config_to_json(cfg, &text) == DC_OK);
    const std::string json = take(text);
    CHECK(json.find("\"time_model\"") != std::string::npos);

    dc_config* copy = nullptr;
    REQUIRE(dc_config_from_json(json.c_str(), &copy) == DC_OK);
    REQUIRE(dc_config_to_json(copy, &text) == DC_OK);
    CHECK(take(text) == json);
    dc_config_free(copy);

    dc_config* bad = nullptr;
    CHECK(dc_config_from_json("{\"nope\": 1}", &bad) == DC_ERR_SCHEMA);
    CHECK(bad == nullptr);
    CHECK(std::string(dc_last_error_message()).find("nope") != std::string::npos);

    CHECK(dc_config_load("/no/such/config.json", &bad) == DC_ERR_IO);
    CHECK(dc_config_to_json(nullptr, &text) == DC_ERR_INVALID_ARGUMENT);
    CHECK(dc_config_default(nullptr) == DC_ERR_INVALID_ARGUMENT);

    dc_config* shipped = nullptr;
    REQUIRE(dc_config_load(data_path("config/declutter.json").c_str(), &shipped) == DC_OK);
    REQUIRE(dc_config_to_json(shipped, &text) == DC_OK);
    CHECK(take(text) == json);
    dc_config_free(shipped);
    dc_config_free(cfg);
}

TEST_CASE("scene handles") {
    dc_config* cfg = nullptr;
    REQUIRE(dc_config_default(&cfg) == DC_OK);
    dc_scene* scene = nullptr;
    REQUIRE(dc_scene_generate(cfg, "T2", 42, 0, &scene) == DC_OK);
    size_t dishes = 0, stacks = 0;
    REQUIRE(dc_scene_dish_count(scene, &dishes) == DC_OK);
    REQUIRE(dc_scene_stack_count(scene, &stacks) == DC_OK);
    CHECK(dishes == 12);
    CHECK(stacks <= 12);
    char* tier = nullptr;
    REQUIRE(dc_scene_tier(scene, &tier) == DC_OK);
    CHECK(take(tier) == "T2");

    char* text = nullptr;
    REQUIRE(dc_scene_to_json(scene, &text) == DC_OK);
    const std::string json = take(text);
    dc_scene* back = nullptr;
    REQUIRE(dc_scene_from_json(cfg, json.c_str(), &back) == DC_OK);
    REQUIRE(dc_scene_to_json(back, &text) == DC_OK);
    CHECK(take(text) == json);
    uint64_t s1 = 0, s2 = 0;
    dc_scene_seed(scene, &s1);
    dc_scene_seed(back, &s2);
    CHECK(s1 == s2);
    dc_scene_free(back);

    dc_scene* other = nullptr;
    REQUIRE(dc_scene_generate(cfg, "T2", 42, 1, &other) == DC_OK);
    dc_scene_seed(other, &s2);
    CHECK(s1 != s2);
    dc_scene_free(other);

    CHECK(dc_scene_generate(cfg, "T9", 42, 0, &other) == DC_ERR_INVALID_ARGUMENT);
    CHECK(std::string(dc_last_error_message()) == "unknown tier");
    CHECK(dc_scene_from_json(cfg, "{", &other) == DC_ERR_SCHEMA);
    CHECK(dc_scene_from_json(cfg, R"({"tier": "T1", "seed": 0, "workspace": [78, 61], "stacks": [
        {"base": [10, 10], "dishes": [{"id": 0, "kind": "cup"}]},
        {"base": [12, 10], "dishes": [{"id": 1, "kind": "cup"}]}]})", &other) == DC_ERR_SCHEMA);
    CHECK(std::string(dc_last_error_message()).find("singulation") != std::string::npos);

    dc_scene_free(scene);
    dc_config_free(cfg);
}

TEST_CASE("trial handles") {
    dc_config* cfg = nullptr;
    REQUIRE(dc_config_default(&cfg) == DC_OK);
    dc_scene* scene = nullptr;
    REQUIRE(dc_scene_generate(cfg, "T0Cups", 1, 0, &scene) == DC_OK);

    dc_trial* trial = nullptr;
    REQUIRE(dc_trial_run(cfg, scene, "stack", 3, 0.0, &trial) == DC_OK);
    int trips = 0, objects = 0, failures = -1;
    double opt = 0, time = 0;
    dc_trial_trips(trial, &trips);
    dc_trial_objects(trial, &objects);
    dc_trial_failures(trial, &failures);
    dc_trial_opt(trial, &opt);
    dc_trial_time(trial, &time);
    CHECK(trips == 3);
    CHECK(objects == 6);
    CHECK(failures == 0);
    CHECK(opt == doctest::Approx(2.0));
    CHECK(time > 0);

    char* text = nullptr;
    REQUIRE(dc_trial_report_json(trial, &text) == DC_OK);
    CHECK(take(text).find("\"policy\": \"stack\"") != std::string::npos);
    REQUIRE(dc_trial_trace_jsonl(trial, &text) == DC_OK);
    const std::string trace = take(text);
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 3);

    dc_trial* again = nullptr;
    REQUIRE(dc_trial_run(cfg, scene, "stack", 3, 0.0, &again) == DC_OK);
    REQUIRE(dc_trial_trace_jsonl(again, &text) == DC_OK);
    CHECK(take(text) == trace);
    dc_trial_free(again);

    CHECK(dc_trial_run(cfg, scene, "greedy", 3, 0.0, &again) == DC_ERR_INVALID_ARGUMENT);
    CHECK(dc_trial_run(cfg, scene, "pull", 3, 2.0, &again) == DC_ERR_INVALID_ARGUMENT);
    CHECK(dc_trial_trips(nullptr, &trips) == DC_ERR_INVALID_ARGUMENT);

    dc_trial_free(trial);
    dc_scene_free(scene);
    dc_config_free(cfg);
}

TEST_CASE("bench through the C API") {
    dc_config* cfg = nullptr;
    REQUIRE(dc_config_default(&cfg) == DC_OK);
    const auto dir = (std::filesystem::temp_directory_path() / "declutter_c_api_bench").string();
    char* summary = nullptr;
    char* errors = nullptr;
    REQUIRE(dc_bench_run(cfg, R"({"tiers": ["T1"], "policies": ["random", "pull"], "scenes_per_tier": 2})", dir.c_str(),
                         &summary, &errors) == DC_OK);
    const std::string csv = take(summary);
    CHECK(take(errors).empty());
    CHECK(csv.rfind("tier,policy,mean_time_s", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(std::filesystem::exists(dir + "/trials.jsonl"));
    std::filesystem::remove_all(dir);

    CHECK(dc_bench_run(cfg, R"({"tiers": ["T1"], "policies": []})", dir.c_str(), nullptr, nullptr) ==
          DC_ERR_INVALID_ARGUMENT);
    CHECK(dc_fit_time(cfg, "/no/such.csv", 5, 0, 1, &summary, nullptr) == DC_ERR_IO);
    dc_config_free(cfg);
}
