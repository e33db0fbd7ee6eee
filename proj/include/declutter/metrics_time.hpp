#pragma once

// Objects-per-trip accounting and the parametric clearing-time model.

#include <string>
#include <vector>

#include "declutter/policies.hpp"

namespace declutter {

/// Seconds per primitive. Each trip costs travel plus delay in both
/// directions.
struct TimeModel {
    double t_grasp = 0.0;
    double t_pull = 0.0;
    double t_stack = 0.0;
    double t_travel = 0.0;
    double bin_delay = 0.0;

    bool valid() const { return t_grasp >= 0 && t_pull >= 0 && t_stack >= 0 && t_travel >= 0 && bin_delay >= 0; }
};

struct ActionCounts {
    int grasps = 0;
    int pulls = 0;
    int stacks = 0;
    int trips = 0;
    int failures = 0;
    int objects = 0;  ///< dishes delivered to the bin
};

ActionCounts count_actions(const std::vector<TraceEvent>& events);

/// Delivered dishes per trip. Throws Error(EmptyTrace) when no trip occurred.
double opt(const std::vector<TraceEvent>& events);

double model_time(const ActionCounts& counts, const TimeModel& tm);
double model_time(const std::vector<TraceEvent>& events, const TimeModel& tm);

struct TrialReport {
    std::string scene_id;
    Tier tier = Tier::Custom;
    PolicyKind policy = PolicyKind::Random;
    int trips = 0;
    int objects_cleared = 0;
    double opt = 0.0;
    double time_s = 0.0;
    int failures = 0;
    ActionCounts counts;
};

TrialReport make_report(std::string scene_id, Tier tier, PolicyKind policy, const Trace& trace,
                        const TimeModel& tm);

struct PolicySummary {
    Tier tier = Tier::Custom;
    PolicyKind policy = PolicyKind::Random;
    int trials = 0;
    double mean_time_s = 0.0;
    double mean_opt = 0.0;            ///< pooled: total objects / total trips
    double mean_opt_per_trial = 0.0;  ///< average of per-trial OpT
    int failures = 0;
    double time_ratio = 1.0;  ///< baseline time / policy time
    double opt_ratio = 1.0;   ///< policy OpT / baseline OpT
};

/// One row per (tier, policy), tiers in enum order and policies in order of
/// first appearance. Throws Error(MissingBaseline) if some scene lacks a
/// baseline trial.
std::vector<PolicySummary> aggregate(const std::vector<TrialReport>& reports, PolicyKind baseline);

/// Average primitive counts of one (tier, policy) cell; fit features.
struct MeanCounts {
    double grasps = 0.0;
    double pulls = 0.0;
    double stacks = 0.0;
    double trips = 0.0;
};

struct FitRow {
    MeanCounts counts;
    double observed_time_s = 0.0;
};

struct TimeFit {
    TimeModel model;
    double relative_rms = 0.0;  ///< sqrt(mean(((pred - obs) / obs)^2))
    std::vector<double> predicted;
};

double predict_time(const MeanCounts& counts, const TimeModel& tm);

/// Non-negative least squares on relative residuals for
/// (t_grasp, t_pull, t_stack, t_travel); bin_delay is left at zero.
TimeFit fit_time_model(const std::vector<FitRow>& rows);

}  // namespace declutter
