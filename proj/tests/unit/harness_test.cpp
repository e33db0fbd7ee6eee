#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "declutter/error.hpp"
#include "declutter/harness.hpp"

using namespace declutter;

namespace {

ErrorCode plan_error(std::string_view text) {
    try {
        plan_from_json(text, Config{});
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error for: " << text);
    return ErrorCode::IoError;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int line_count(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("plan parsing") {
    const auto p = plan_from_json(R"({"tiers": ["T1", "T2"], "policies": ["random", "pull"], "scenes_per_tier": 2,
                                      "base_seed": 9})",
                                  Config{});
    CHECK(p.tiers == std::vector<Tier>{Tier::T1, Tier::T2});
    CHECK(p.policies == std::vector<PolicyKind>{PolicyKind::Random, PolicyKind::Pull});
    CHECK(p.scenes_per_tier == 2);
    CHECK(p.base_seed == 9);
    CHECK(p.bin_delays == std::vector<double>{0, 3, 5});
    CHECK(p.threads == 1);

    CHECK(plan_error(R"({"tiers": ["T1"], "policies": []})") == ErrorCode::InvalidArgument);
    CHECK(plan_error(R"({"tiers": [], "policies": ["random"]})") == ErrorCode::InvalidArgument);
    CHECK(plan_error(R"({"tiers": ["T1"], "policies": ["pull"]})") == ErrorCode::InvalidArgument);
    CHECK(plan_error(R"({"tiers": ["T1"], "policies": ["random"], "scenes_per_tier": 0})") == ErrorCode::InvalidArgument);
    CHECK(plan_error(R"({"tiers": ["T1"], "policies": ["random"], "extra": 1})") == ErrorCode::SchemaError);
    CHECK(plan_error(R"({"tiers": ["T7"], "policies": ["random"]})") == ErrorCode::SchemaError);
    CHECK(plan_error("[1, 2]") == ErrorCode::SchemaError);
}

TEST_CASE("seed derivation separates tiers, scenes and policies") {
    CHECK(scene_seed(1, Tier::T1, 0) != scene_seed(1, Tier::T1, 1));
    CHECK(scene_seed(1, Tier::T1, 0) != scene_seed(1, Tier::T2, 0));
    CHECK(scene_seed(1, Tier::T1, 0) != scene_seed(2, Tier::T1, 0));
    CHECK(trial_seed(1, Tier::T1, 0, PolicyKind::Pull) != trial_seed(1, Tier::T1, 0, PolicyKind::Stack));
    const auto s = corpus_scene(Config{}, Tier::T1, 1, 3);
    CHECK(s.seed == scene_seed(1, Tier::T1, 3));
    CHECK(s.tier == Tier::T1);
}

TEST_CASE("bench: one summary row per tier and policy, identical across thread counts") {
    auto plan = plan_from_json(std::string(R"({"tiers": ["T0Cups", "T0Bowls", "T0Utensils", "T1", "T2"],
                                               "policies": ["random", "stack", "pull"], "scenes_per_tier": 2,
                                               "base_seed": 5, "p_fail": 0.1})"),
                               Config{});
    const auto one = run_bench(plan, Config{});
    plan.threads = 4;
    const auto four = run_bench(plan, Config{});
    CHECK(one.errors.empty());
    CHECK(one.trials.size() == 30);
    CHECK(one.summary.size() == 15);
    CHECK(summary_csv(one.summary) == summary_csv(four.summary));
    CHECK(line_count(summary_csv(one.summary)) == 16);
    for (const auto& row : one.summary) {
        if (row.policy == PolicyKind::Random) {
            CHECK(row.opt_ratio == doctest::Approx(1.0));
            CHECK(row.time_ratio == doctest::Approx(1.0));
        }
    }
    REQUIRE(one.delays.size() == 3);
    CHECK(one.delays[2].bin_delay == 5.0);

    const auto dir = std::filesystem::temp_directory_path() / "declutter_bench_test";
    std::filesystem::remove_all(dir);
    write_bench(one, dir.string());
    CHECK(slurp(dir / "summary.csv") == summary_csv(one.summary));
    CHECK(std::filesystem::exists(dir / "summary_delay_0.csv"));
    CHECK(std::filesystem::exists(dir / "summary_delay_3.csv"));
    CHECK(std::filesystem::exists(dir / "summary_delay_5.csv"));
    CHECK(line_count(slurp(dir / "trials.jsonl")) == 30);
    const auto first = slurp(dir / "summary.csv");
    write_bench(four, dir.string());
    CHECK(slurp(dir / "summary.csv") == first);
    std::filesystem::remove_all(dir);
}

TEST_CASE("summary CSV header") {
    const auto csv = summary_csv({});
    CHECK(csv == "tier,policy,mean_time_s,mean_opt,failures,time_ratio,opt_ratio\n");
}

TEST_CASE("reference table parsing") {
    const auto rows = parse_reference_table("tier,policy,time_s,opt,failures\nT1,pull,102.1,1.6,3\nT0Cups,random,78.2,0.8,0\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].tier == Tier::T1);
    CHECK(rows[0].policy == PolicyKind::Pull);
    CHECK(rows[0].time_s == doctest::Approx(102.1));
    CHECK(rows[1].failures == 0);
    CHECK_THROWS_AS(parse_reference_table("tier,policy,time\nT1,pull,1\n"), Error);
    CHECK_THROWS_AS(parse_reference_table("tier,policy,time_s,opt,failures\nT1,pull,abc,1,0\n"), Error);
    CHECK_THROWS_AS(read_reference_table("no/such/file.csv"), Error);
    CHECK(read_reference_table("data/table1.csv").size() == 15);
}

TEST_CASE("time fit against synthetic reference rows") {
    const Config cfg;
    std::vector<ReferenceRow> rows;
    for (Tier t : {Tier::T0Cups, Tier::T1})
        for (PolicyKind k : {PolicyKind::Random, PolicyKind::Stack, PolicyKind::Pull}) {
            const auto c = simulate_mean_counts(cfg, t, k, 10, 0);
            rows.push_back({t, k, predict_time(c, cfg.time_model), 0, 0});
        }
    const auto rep = fit_time_to_reference(cfg, rows, 10, 0, 2);
    CHECK(rep.fit.relative_rms < 1e-6);
    CHECK(rep.counts.size() == rows.size());
    CHECK(time_fit_fragment(rep).find("\"time_model\"") != std::string::npos);
}
