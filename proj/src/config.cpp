#include "declutter/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "declutter/error.hpp"
#include "declutter/scene_io.hpp"

namespace declutter {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, "config: " + what); }

// Walks one JSON object, rejecting keys nobody asked for.
class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) schema(path_ + " must be an object");
    }

    const json* get(const std::string& key) {
        seen_.push_back(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void num(const std::string& key, double& out, double lo = 0.0) {
        if (const json* v = get(key)) {
            if (!v->is_number()) schema(where(key) + " must be a number");
            const double d = v->get<double>();
            if (!std::isfinite(d) || d < lo) schema(where(key) + " must be >= " + format_fixed(lo, 1));
            out = d;
        }
    }

    void count(const std::string& key, int& out, int lo = 0) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer() || v->get<long long>() < lo) {
                schema(where(key) + " must be an integer >= " + std::to_string(lo));
            }
            out = v->get<int>();
        }
    }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
                schema("unknown key '" + where(it.key()) + "'");
            }
        }
    }

private:
    const json& obj_;
    std::string path_;
    std::vector<std::string> seen_;
};

void read_dish(const json& v, const std::string& path, DishSpec& d) {
    Reader r(v, path);
    if (d.kind == DishKind::Utensil) {
        r.num("length", d.length);
        r.num("width", d.width);
    } else {
        r.num("radius", d.radius);
    }
    r.num("grasp_height", d.grasp_height);
    r.num("nest_offset", d.nest_offset);
    r.finish();
    const bool shape_ok = d.kind == DishKind::Utensil ? (d.width > 0 && d.length >= d.width) : d.radius > 0;
    if (!shape_ok || d.grasp_height <= 0) schema(path + " has non-positive dimensions");
    if (d.kind != DishKind::Utensil && d.nest_offset <= 0) schema(path + ".nest_offset must be positive");
}

std::string num(double v) { return json(v).dump(); }

}  // namespace

// Output of `declutter fit-time --table data/table1.csv` (200 scenes per
// cell, seed 0).
TimeModel Config::default_time_model() {
    TimeModel tm;
    tm.t_grasp = 0.0;
    tm.t_pull = 12.620343217232355;
    tm.t_stack = 9.013704891493209;
    tm.t_travel = 5.438996715396302;
    tm.bin_delay = 0.0;
    return tm;
}

std::map<Tier, TierConfig> Config::default_tiers() {
    std::map<Tier, TierConfig> out;
    for (Tier t : {Tier::T0Cups, Tier::T0Bowls, Tier::T0Utensils, Tier::T1, Tier::T2}) out[t] = TierConfig::preset(t);
    return out;
}

TierConfig Config::tier(Tier t) const {
    auto it = tiers.find(t);
    if (it == tiers.end()) throw Error(ErrorCode::InvalidArgument, "no tier " + std::string(to_string(t)) + " in config");
    return it->second;
}

PolicyConfig Config::policy(PolicyKind kind) const { return {kind, utensil_stacking, pair_selection}; }

Config config_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        schema(std::string("malformed JSON: ") + e.what());
    }
    Config cfg;
    Reader top(doc, "");

    if (const json* g = top.get("gripper")) {
        Reader r(*g, "gripper");
        GripperSpec& gs = cfg.sim.gripper;
        r.num("max_opening", gs.max_opening);
        r.num("jaw_height", gs.jaw_height);
        r.num("closed_width", gs.closed_width);
        r.num("height_similarity_threshold", gs.height_similarity_threshold);
        r.num("clearance_margin", gs.clearance_margin);
        r.finish();
        if (!gs.valid()) schema("gripper values are inconsistent");
    }
    if (const json* d = top.get("dishes")) {
        Reader r(*d, "dishes");
        if (const json* v = r.get("cup")) read_dish(*v, "dishes.cup", cfg.sim.dishes.cup);
        if (const json* v = r.get("bowl")) read_dish(*v, "dishes.bowl", cfg.sim.dishes.bowl);
        if (const json* v = r.get("utensil")) read_dish(*v, "dishes.utensil", cfg.sim.dishes.utensil);
        r.finish();
    }
    if (const json* w = top.get("workspace")) {
        Reader r(*w, "workspace");
        r.num("width", cfg.workspace.width);
        r.num("height", cfg.workspace.height);
        r.finish();
        if (cfg.workspace.width <= 0 || cfg.workspace.height <= 0) schema("workspace must have positive size");
    }
    if (const json* t = top.get("tiers")) {
        if (!t->is_object()) schema("tiers must be an object");
        for (auto it = t->begin(); it != t->end(); ++it) {
            auto tier = parse_tier(it.key());
            if (!tier) schema("unknown tier '" + it.key() + "'");
            TierConfig tc = cfg.tiers.count(*tier) ? cfg.tiers[*tier] : TierConfig{*tier, 0, 0, 0, 0, 1};
            Reader r(it.value(), "tiers." + it.key());
            r.count("cups", tc.n_cups);
            r.count("bowls", tc.n_bowls);
            r.count("utensils", tc.n_utensils);
            r.count("max_intersections", tc.max_intersections);
            r.count("max_initial_stack", tc.max_initial_stack, 1);
            r.finish();
            if (!tc.valid()) schema("tiers." + it.key() + " is not a valid tier");
            cfg.tiers[*tier] = tc;
        }
    }
    if (const json* t = top.get("time_model")) {
        Reader r(*t, "time_model");
        TimeModel& tm = cfg.time_model;
        r.num("t_grasp", tm.t_grasp);
        r.num("t_pull", tm.t_pull);
        r.num("t_stack", tm.t_stack);
        r.num("t_travel", tm.t_travel);
        r.num("bin_delay", tm.bin_delay);
        r.finish();
    }
    if (const json* b = top.get("bin_delays")) {
        if (!b->is_array()) schema("bin_delays must be an array");
        cfg.bin_delays.clear();
        for (const auto& v : *b) {
            if (!v.is_number() || !(v.get<double>() >= 0)) schema("bin_delays entries must be non-negative numbers");
            cfg.bin_delays.push_back(v.get<double>());
        }
    }
    top.num("p_fail", cfg.p_fail);
    if (cfg.p_fail > 1.0) schema("p_fail must lie in [0, 1]");
    if (const json* p = top.get("policy")) {
        Reader r(*p, "policy");
        if (const json* v = r.get("utensil_stacking")) {
            auto m = v->is_string() ? parse_utensil_stacking(v->get<std::string>()) : std::nullopt;
            if (!m) schema("policy.utensil_stacking must be one_per_bowl or all_on_one_bowl");
            cfg.utensil_stacking = *m;
        }
        if (const json* v = r.get("pair_selection")) {
            auto m = v->is_string() ? parse_pair_selection(v->get<std::string>()) : std::nullopt;
            if (!m) schema("policy.pair_selection must be nearest_first or lookahead");
            cfg.pair_selection = *m;
        }
        r.finish();
    }
    top.finish();
    return cfg;
}

std::string config_to_json(const Config& c) {
    const auto& g = c.sim.gripper;
    const auto& d = c.sim.dishes;
    const auto& tm = c.time_model;
    std::string out = "{\n";
    out += "  \"gripper\": {\"max_opening\": " + num(g.max_opening) + ", \"jaw_height\": " + num(g.jaw_height) +
           ", \"closed_width\": " + num(g.closed_width) + ", \"height_similarity_threshold\": " +
           num(g.height_similarity_threshold) + ", \"clearance_margin\": " + num(g.clearance_margin) + "},\n";
    out += "  \"dishes\": {\n";
    out += "    \"cup\": {\"radius\": " + num(d.cup.radius) + ", \"grasp_height\": " + num(d.cup.grasp_height) +
           ", \"nest_offset\": " + num(d.cup.nest_offset) + "},\n";
    out += "    \"bowl\": {\"radius\": " + num(d.bowl.radius) + ", \"grasp_height\": " + num(d.bowl.grasp_height) +
           ", \"nest_offset\": " + num(d.bowl.nest_offset) + "},\n";
    out += "    \"utensil\": {\"length\": " + num(d.utensil.length) + ", \"width\": " + num(d.utensil.width) +
           ", \"grasp_height\": " + num(d.utensil.grasp_height) + ", \"nest_offset\": " + num(d.utensil.nest_offset) +
           "}\n  },\n";
    out += "  \"workspace\": {\"width\": " + num(c.workspace.width) + ", \"height\": " + num(c.workspace.height) +
           "},\n";
    out += "  \"tiers\": {\n";
    std::size_t i = 0;
    for (const auto& [t, tc] : c.tiers) {
        out += "    \"" + std::string(to_string(t)) + "\": {\"cups\": " + std::to_string(tc.n_cups) +
               ", \"bowls\": " + std::to_string(tc.n_bowls) + ", \"utensils\": " + std::to_string(tc.n_utensils) +
               ", \"max_intersections\": " + std::to_string(tc.max_intersections) +
               ", \"max_initial_stack\": " + std::to_string(tc.max_initial_stack) + "}" +
               (++i < c.tiers.size() ? ",\n" : "\n");
    }
    out += "  },\n";
    out += "  \"time_model\": {\"t_grasp\": " + num(tm.t_grasp) + ", \"t_pull\": " + num(tm.t_pull) +
           ", \"t_stack\": " + num(tm.t_stack) + ", \"t_travel\": " + num(tm.t_travel) +
           ", \"bin_delay\": " + num(tm.bin_delay) + "},\n";
    out += "  \"bin_delays\": [";
    for (std::size_t k = 0; k < c.bin_delays.size(); ++k) out += (k ? ", " : "") + num(c.bin_delays[k]);
    out += "],\n";
    out += "  \"p_fail\": " + num(c.p_fail) + ",\n";
    out += "  \"policy\": {\"utensil_stacking\": \"" + std::string(to_string(c.utensil_stacking)) +
           "\", \"pair_selection\": \"" + std::string(to_string(c.pair_selection)) + "\"}\n";
    out += "}\n";
    return out;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return config_from_json(ss.str());
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

std::string default_config_path() {
    if (const char* env = std::getenv("DECLUTTER_CONFIG"); env && *env) return env;
    return "config/declutter.json";
}

}  // namespace declutter
