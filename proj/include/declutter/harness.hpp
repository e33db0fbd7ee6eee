#pragma once

// Batch experiments: seeded scene corpora, parallel trials, per-tier
// summaries and the time-model fit.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "declutter/config.hpp"

namespace declutter {

struct ExperimentPlan {
    std::vector<Tier> tiers;
    int scenes_per_tier = 3;
    std::vector<PolicyKind> policies;
    std::uint64_t base_seed = 0;
    double p_fail = 0.0;
    std::vector<double> bin_delays;
    unsigned threads = 1;
};

/// Missing fields take their values from `cfg` (p_fail, bin_delays, time
/// model) or the defaults above. Throws Error(SchemaError) for malformed
/// input and Error(InvalidArgument) for an empty tier or policy list, a
/// plan without the random baseline, or scenes_per_tier < 1.
ExperimentPlan plan_from_json(std::string_view text, const Config& cfg);

std::uint64_t scene_seed(std::uint64_t base_seed, Tier tier, std::uint64_t index);
std::uint64_t trial_seed(std::uint64_t base_seed, Tier tier, std::uint64_t index, PolicyKind policy);

/// Scene `index` of a tier's corpus; the stored seed is the derived one.
SceneState corpus_scene(const Config& cfg, Tier tier, std::uint64_t base_seed, std::uint64_t index);

struct TrialResult {
    Tier tier = Tier::Custom;
    int scene_index = 0;
    PolicyKind policy = PolicyKind::Random;
    TrialReport report;
    std::vector<TraceEvent> events;
    std::string error;  ///< non-empty when the trial threw
};

struct DelaySummary {
    double bin_delay = 0.0;
    std::vector<PolicySummary> rows;
};

struct BenchResult {
    std::vector<TrialResult> trials;  ///< ordered by (tier, scene, policy) as listed in the plan
    std::vector<PolicySummary> summary;
    std::vector<DelaySummary> delays;
    std::vector<std::string> errors;
};

BenchResult run_bench(const ExperimentPlan& plan, const Config& cfg);

std::string summary_csv(const std::vector<PolicySummary>& rows);

/// Writes summary.csv, summary_delay_<d>.csv per swept delay and
/// trials.jsonl into `out_dir`, creating it if needed.
void write_bench(const BenchResult& result, const std::string& out_dir);

struct ReferenceRow {
    Tier tier = Tier::Custom;
    PolicyKind policy = PolicyKind::Random;
    double time_s = 0.0;
    double opt = 0.0;
    int failures = 0;
};

/// CSV with header tier,policy,time_s,opt,failures. Tier names accept the
/// canonical spellings. Throws Error(SchemaError) or Error(IoError).
std::vector<ReferenceRow> read_reference_table(const std::string& path);
std::vector<ReferenceRow> parse_reference_table(std::string_view text);

/// Mean primitive counts of failure-free trials on `scenes` corpus scenes.
MeanCounts simulate_mean_counts(const Config& cfg, Tier tier, PolicyKind policy, int scenes, std::uint64_t base_seed,
                                unsigned threads = 1);

struct TimeFitReport {
    TimeFit fit;
    std::vector<ReferenceRow> rows;
    std::vector<MeanCounts> counts;
};

TimeFitReport fit_time_to_reference(const Config& cfg, const std::vector<ReferenceRow>& rows, int scenes,
                                    std::uint64_t base_seed, unsigned threads = 1);

/// {"time_model": {...}} with the fitted parameters, loadable as a config.
std::string time_fit_fragment(const TimeFitReport& report);

}  // namespace declutter
