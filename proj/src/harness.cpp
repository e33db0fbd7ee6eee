#include "declutter/harness.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "declutter/error.hpp"
#include "declutter/scene_io.hpp"

namespace declutter {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, "plan: " + what); }

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::string delay_name(double d) {
    std::string s = format_fixed(d, 3);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace

ExperimentPlan plan_from_json(std::string_view text, const Config& cfg) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        schema(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) schema("top level must be an object");
    static const std::set<std::string> known{"tiers",  "scenes_per_tier", "policies", "base_seed",
                                             "p_fail", "bin_delays",      "threads"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!known.count(it.key())) schema("unknown key '" + it.key() + "'");
    }

    ExperimentPlan plan;
    plan.p_fail = cfg.p_fail;
    plan.bin_delays = cfg.bin_delays;

    auto names = [&](const char* key) {
        std::vector<std::string> out;
        auto it = doc.find(key);
        if (it == doc.end()) return out;
        if (!it->is_array()) schema(std::string(key) + " must be an array of strings");
        for (const auto& v : *it) {
            if (!v.is_string()) schema(std::string(key) + " must be an array of strings");
            out.push_back(v.get<std::string>());
        }
        return out;
    };
    for (const auto& n : names("tiers")) {
        auto t = parse_tier(n);
        if (!t) schema("unknown tier '" + n + "'");
        if (std::find(plan.tiers.begin(), plan.tiers.end(), *t) == plan.tiers.end()) plan.tiers.push_back(*t);
    }
    for (const auto& n : names("policies")) {
        auto p = parse_policy(n);
        if (!p) schema("unknown policy '" + n + "'");
        if (std::find(plan.policies.begin(), plan.policies.end(), *p) == plan.policies.end()) {
            plan.policies.push_back(*p);
        }
    }
    if (auto it = doc.find("scenes_per_tier"); it != doc.end()) {
        if (!it->is_number_integer()) schema("scenes_per_tier must be an integer");
        plan.scenes_per_tier = it->get<int>();
    }
    if (auto it = doc.find("base_seed"); it != doc.end()) {
        if (!it->is_number_unsigned()) schema("base_seed must be a non-negative integer");
        plan.base_seed = it->get<std::uint64_t>();
    }
    if (auto it = doc.find("p_fail"); it != doc.end()) {
        if (!it->is_number() || !(it->get<double>() >= 0.0 && it->get<double>() <= 1.0)) {
            schema("p_fail must be a number in [0, 1]");
        }
        plan.p_fail = it->get<double>();
    }
    if (auto it = doc.find("bin_delays"); it != doc.end()) {
        if (!it->is_array()) schema("bin_delays must be an array");
        plan.bin_delays.clear();
        for (const auto& v : *it) {
            if (!v.is_number() || !(v.get<double>() >= 0.0)) schema("bin_delays entries must be non-negative");
            plan.bin_delays.push_back(v.get<double>());
        }
    }
    if (auto it = doc.find("threads"); it != doc.end()) {
        if (!it->is_number_unsigned()) schema("threads must be a non-negative integer");
        plan.threads = it->get<unsigned>();
    }

    if (plan.tiers.empty()) throw Error(ErrorCode::InvalidArgument, "plan lists no tiers");
    if (plan.policies.empty()) throw Error(ErrorCode::InvalidArgument, "plan lists no policies");
    if (std::find(plan.policies.begin(), plan.policies.end(), PolicyKind::Random) == plan.policies.end()) {
        throw Error(ErrorCode::InvalidArgument, "plan must include the random baseline");
    }
    if (plan.scenes_per_tier < 1) throw Error(ErrorCode::InvalidArgument, "scenes_per_tier must be at least 1");
    for (Tier t : plan.tiers) cfg.tier(t);
    return plan;
}

std::uint64_t scene_seed(std::uint64_t base_seed, Tier tier, std::uint64_t index) {
    return derive_seed({base_seed, static_cast<std::uint64_t>(tier), index});
}

std::uint64_t trial_seed(std::uint64_t base_seed, Tier tier, std::uint64_t index, PolicyKind policy) {
    return derive_seed({base_seed, static_cast<std::uint64_t>(tier), index, 100 + static_cast<std::uint64_t>(policy)});
}

SceneState corpus_scene(const Config& cfg, Tier tier, std::uint64_t base_seed, std::uint64_t index) {
    return generate_scene(cfg.tier(tier), scene_seed(base_seed, tier, index), cfg.sim.dishes, cfg.workspace);
}

BenchResult run_bench(const ExperimentPlan& plan, const Config& cfg) {
    const std::size_t n_pol = plan.policies.size();
    const std::size_t per_tier = static_cast<std::size_t>(plan.scenes_per_tier) * n_pol;
    BenchResult out;
    out.trials.resize(plan.tiers.size() * per_tier);

    unsigned threads = plan.threads ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
    parallel_for(out.trials.size(), threads, [&](std::size_t i) {
        TrialResult& r = out.trials[i];
        r.tier = plan.tiers[i / per_tier];
        r.scene_index = static_cast<int>((i % per_tier) / n_pol);
        r.policy = plan.policies[i % n_pol];
        const std::string scene_id = std::string(to_string(r.tier)) + "_" + std::to_string(r.scene_index);
        try {
            const SceneState scene = corpus_scene(cfg, r.tier, plan.base_seed, r.scene_index);
            const Trace trace = run_policy(scene, cfg.policy(r.policy), cfg.sim,
                                           trial_seed(plan.base_seed, r.tier, r.scene_index, r.policy),
                                           RunOptions{plan.p_fail, 0});
            r.report = make_report(scene_id, r.tier, r.policy, trace, cfg.time_model);
            r.events = trace.events;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    });

    // Scenes whose baseline trial broke cannot be compared and are left out.
    std::set<std::pair<Tier, int>> broken;
    for (const auto& r : out.trials) {
        if (r.error.empty()) continue;
        out.errors.push_back(std::string(to_string(r.tier)) + " scene " + std::to_string(r.scene_index) + " " +
                             std::string(to_string(r.policy)) + ": " + r.error);
        if (r.policy == PolicyKind::Random) broken.emplace(r.tier, r.scene_index);
    }
    auto reports_with_delay = [&](const TimeModel& tm) {
        std::vector<TrialReport> reports;
        for (const auto& r : out.trials) {
            if (!r.error.empty() || broken.count({r.tier, r.scene_index})) continue;
            TrialReport rep = r.report;
            rep.time_s = model_time(rep.counts, tm);
            reports.push_back(rep);
        }
        return reports;
    };
    auto summarize = [&](const TimeModel& tm) {
        auto reports = reports_with_delay(tm);
        return reports.empty() ? std::vector<PolicySummary>{} : aggregate(reports, PolicyKind::Random);
    };
    out.summary = summarize(cfg.time_model);
    for (double d : plan.bin_delays) {
        TimeModel tm = cfg.time_model;
        tm.bin_delay = d;
        out.delays.push_back({d, summarize(tm)});
    }
    return out;
}

std::string summary_csv(const std::vector<PolicySummary>& rows) {
    std::string out = "tier,policy,mean_time_s,mean_opt,failures,time_ratio,opt_ratio\n";
    for (const auto& r : rows) {
        out += std::string(to_string(r.tier)) + "," + std::string(to_string(r.policy)) + "," +
               format_fixed(r.mean_time_s, 3) + "," + format_fixed(r.mean_opt, 3) + "," + std::to_string(r.failures) +
               "," + format_fixed(r.time_ratio, 3) + "," + format_fixed(r.opt_ratio, 3) + "\n";
    }
    return out;
}

void write_bench(const BenchResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir + ": " + ec.message());
    const fs::path dir(out_dir);
    write_file(dir / "summary.csv", summary_csv(result.summary));
    for (const auto& d : result.delays) {
        write_file(dir / ("summary_delay_" + delay_name(d.bin_delay) + ".csv"), summary_csv(d.rows));
    }
    std::string lines;
    for (const auto& r : result.trials) {
        if (!r.error.empty()) {
            lines += "{\"tier\": \"" + std::string(to_string(r.tier)) + "\", \"scene\": " +
                     std::to_string(r.scene_index) + ", \"policy\": \"" + std::string(to_string(r.policy)) +
                     "\", \"error\": " + json(r.error).dump() + "}\n";
            continue;
        }
        std::string rep = report_to_json(r.report);
        rep.pop_back();
        rep += ", \"trace\": [";
        for (std::size_t k = 0; k < r.events.size(); ++k) rep += (k ? ", " : "") + trace_event_to_json(r.events[k]);
        lines += rep + "]}\n";
    }
    write_file(dir / "trials.jsonl", lines);
}

std::vector<ReferenceRow> parse_reference_table(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<ReferenceRow> rows;
    auto bad = [](const std::string& what) { throw Error(ErrorCode::SchemaError, "reference table: " + what); };
    if (!std::getline(in, line)) bad("empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "tier,policy,time_s,opt,failures") bad("expected header tier,policy,time_s,opt,failures");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (cells.size() != 5) bad("line " + std::to_string(lineno) + " needs 5 cells");
        ReferenceRow r;
        auto t = parse_tier(cells[0]);
        auto p = parse_policy(cells[1]);
        if (!t || !p) bad("line " + std::to_string(lineno) + " has an unknown tier or policy");
        r.tier = *t;
        r.policy = *p;
        try {
            std::size_t used = 0;
            r.time_s = std::stod(cells[2], &used);
            if (used != cells[2].size()) throw std::invalid_argument("trailing");
            r.opt = std::stod(cells[3], &used);
            if (used != cells[3].size()) throw std::invalid_argument("trailing");
            r.failures = std::stoi(cells[4], &used);
            if (used != cells[4].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            bad("line " + std::to_string(lineno) + " has a malformed number");
        }
        if (!(r.time_s > 0)) bad("line " + std::to_string(lineno) + " needs a positive time");
        rows.push_back(r);
    }
    if (rows.empty()) bad("no rows");
    return rows;
}

std::vector<ReferenceRow> read_reference_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_reference_table(ss.str());
}

MeanCounts simulate_mean_counts(const Config& cfg, Tier tier, PolicyKind policy, int scenes, std::uint64_t base_seed,
                                unsigned threads) {
    if (scenes < 1) throw Error(ErrorCode::InvalidArgument, "need at least one scene");
    std::vector<ActionCounts> counts(static_cast<std::size_t>(scenes));
    parallel_for(counts.size(), threads, [&](std::size_t i) {
        const SceneState scene = corpus_scene(cfg, tier, base_seed, i);
        const Trace trace = run_policy(scene, cfg.policy(policy), cfg.sim, trial_seed(base_seed, tier, i, policy));
        counts[i] = count_actions(trace.events);
    });
    MeanCounts m;
    for (const auto& c : counts) {
        m.grasps += c.grasps;
        m.pulls += c.pulls;
        m.stacks += c.stacks;
        m.trips += c.trips;
    }
    const double n = scenes;
    m.grasps /= n;
    m.pulls /= n;
    m.stacks /= n;
    m.trips /= n;
    return m;
}

TimeFitReport fit_time_to_reference(const Config& cfg, const std::vector<ReferenceRow>& rows, int scenes,
                                    std::uint64_t base_seed, unsigned threads) {
    TimeFitReport rep;
    rep.rows = rows;
    std::map<std::pair<Tier, PolicyKind>, MeanCounts> cache;
    std::vector<FitRow> fit_rows;
    for (const auto& r : rows) {
        auto key = std::pair{r.tier, r.policy};
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, simulate_mean_counts(cfg, r.tier, r.policy, scenes, base_seed, threads)).first;
        }
        rep.counts.push_back(it->second);
        fit_rows.push_back({it->second, r.time_s});
    }
    rep.fit = fit_time_model(fit_rows);
    return rep;
}

std::string time_fit_fragment(const TimeFitReport& report) {
    const TimeModel& tm = report.fit.model;
    auto num = [](double v) { return json(v).dump(); };
    return "{\n  \"time_model\": {\"t_grasp\": " + num(tm.t_grasp) + ", \"t_pull\": " + num(tm.t_pull) +
           ", \"t_stack\": " + num(tm.t_stack) + ", \"t_travel\": " + num(tm.t_travel) +
           ", \"bin_delay\": " + num(tm.bin_delay) + "}\n}\n";
}

}  // namespace declutter
