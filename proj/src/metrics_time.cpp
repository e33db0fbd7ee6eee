#include "declutter/metrics_time.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "declutter/error.hpp"
#include "declutter/nnls.hpp"

namespace declutter {

ActionCounts count_actions(const std::vector<TraceEvent>& events) {
    ActionCounts c;
    for (const auto& e : events) {
        ++c.grasps;
        if (std::holds_alternative<PullGrasp>(e.action)) ++c.pulls;
        if (const auto* sg = std::get_if<StackGrasp>(&e.action)) c.stacks += static_cast<int>(sg->stacks.size());
        if (e.trip) ++c.trips;
        if (e.failed) ++c.failures;
        c.objects += static_cast<int>(e.moved_to_bin.size());
    }
    return c;
}

double opt(const std::vector<TraceEvent>& events) {
    const ActionCounts c = count_actions(events);
    if (c.trips == 0) throw Error(ErrorCode::EmptyTrace, "objects per trip is undefined without trips");
    return static_cast<double>(c.objects) / c.trips;
}

double model_time(const ActionCounts& c, const TimeModel& tm) {
    return c.grasps * tm.t_grasp + c.pulls * tm.t_pull + c.stacks * tm.t_stack +
           c.trips * 2.0 * (tm.t_travel + tm.bin_delay);
}

double model_time(const std::vector<TraceEvent>& events, const TimeModel& tm) {
    return model_time(count_actions(events), tm);
}

TrialReport make_report(std::string scene_id, Tier tier, PolicyKind policy, const Trace& trace,
                        const TimeModel& tm) {
    TrialReport r;
    r.scene_id = std::move(scene_id);
    r.tier = tier;
    r.policy = policy;
    r.counts = count_actions(trace.events);
    r.trips = r.counts.trips;
    r.objects_cleared = r.counts.objects;
    r.opt = r.trips > 0 ? static_cast<double>(r.objects_cleared) / r.trips : 0.0;
    r.time_s = model_time(r.counts, tm);
    r.failures = r.counts.failures;
    return r;
}

std::vector<PolicySummary> aggregate(const std::vector<TrialReport>& reports, PolicyKind baseline) {
    std::vector<PolicyKind> policy_order;
    for (const auto& r : reports) {
        if (std::find(policy_order.begin(), policy_order.end(), r.policy) == policy_order.end()) {
            policy_order.push_back(r.policy);
        }
    }
    std::set<std::pair<Tier, std::string>> scenes, with_baseline;
    for (const auto& r : reports) {
        scenes.emplace(r.tier, r.scene_id);
        if (r.policy == baseline) with_baseline.emplace(r.tier, r.scene_id);
    }
    for (const auto& s : scenes) {
        if (!with_baseline.count(s)) {
            throw Error(ErrorCode::MissingBaseline, "scene " + s.second + " (" + std::string(to_string(s.first)) +
                                                        ") has no " + std::string(to_string(baseline)) + " trial");
        }
    }

    struct Acc {
        int trials = 0, objects = 0, trips = 0, failures = 0;
        double time = 0.0, opt_sum = 0.0;
    };
    std::map<std::pair<Tier, PolicyKind>, Acc> acc;
    for (const auto& r : reports) {
        Acc& a = acc[{r.tier, r.policy}];
        ++a.trials;
        a.objects += r.objects_cleared;
        a.trips += r.trips;
        a.failures += r.failures;
        a.time += r.time_s;
        a.opt_sum += r.opt;
    }

    std::vector<PolicySummary> out;
    std::set<Tier> tiers;
    for (const auto& s : scenes) tiers.insert(s.first);
    for (Tier t : tiers) {
        const Acc& base = acc.at({t, baseline});
        const double base_time = base.time / base.trials;
        const double base_opt = base.trips > 0 ? static_cast<double>(base.objects) / base.trips : 0.0;
        for (PolicyKind p : policy_order) {
            auto it = acc.find({t, p});
            if (it == acc.end()) continue;
            const Acc& a = it->second;
            PolicySummary s;
            s.tier = t;
            s.policy = p;
            s.trials = a.trials;
            s.mean_time_s = a.time / a.trials;
            s.mean_opt = a.trips > 0 ? static_cast<double>(a.objects) / a.trips : 0.0;
            s.mean_opt_per_trial = a.opt_sum / a.trials;
            s.failures = a.failures;
            s.time_ratio = s.mean_time_s > 0.0 ? base_time / s.mean_time_s : 1.0;
            s.opt_ratio = base_opt > 0.0 ? s.mean_opt / base_opt : 1.0;
            out.push_back(s);
        }
    }
    return out;
}

double predict_time(const MeanCounts& c, const TimeModel& tm) {
    return c.grasps * tm.t_grasp + c.pulls * tm.t_pull + c.stacks * tm.t_stack +
           c.trips * 2.0 * (tm.t_travel + tm.bin_delay);
}

TimeFit fit_time_model(const std::vector<FitRow>& rows) {
    if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "time fit needs at least one row");
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd A(m, 4);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const FitRow& r = rows[static_cast<std::size_t>(i)];
        if (!(r.observed_time_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "observed times must be positive");
        const double w = 1.0 / r.observed_time_s;
        A(i, 0) = w * r.counts.grasps;
        A(i, 1) = w * r.counts.pulls;
        A(i, 2) = w * r.counts.stacks;
        A(i, 3) = w * 2.0 * r.counts.trips;
        b(i) = 1.0;
    }
    const NnlsResult sol = nnls(A, b);

    TimeFit fit;
    fit.model = {sol.x(0), sol.x(1), sol.x(2), sol.x(3), 0.0};
    double sq = 0.0;
    for (const auto& r : rows) {
        const double p = predict_time(r.counts, fit.model);
        fit.predicted.push_back(p);
        sq += std::pow((p - r.observed_time_s) / r.observed_time_s, 2);
    }
    fit.relative_rms = std::sqrt(sq / static_cast<double>(rows.size()));
    return fit;
}

}  // namespace declutter
