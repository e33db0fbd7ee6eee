#include "declutter/scene_io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "declutter/error.hpp"

namespace declutter {

namespace {

using nlohmann::json;

std::string point(const geom::Point2& p) { return "[" + format_fixed(p.x) + ", " + format_fixed(p.y) + "]"; }

std::string int_list(const std::vector<int>& ids) {
    std::string out = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(ids[i]);
    }
    return out + "]";
}

std::string grasp_json(const GraspAction& g) {
    return "{\"point\": " + point(g.point) + ", \"z\": " + format_fixed(g.z) + ", \"theta\": " + format_fixed(g.theta) +
           ", \"targets\": " + int_list(g.targets) + "}";
}

std::string pull_json(const PullAction& p) {
    return "{\"mover\": " + std::to_string(p.mover) + ", \"anchor\": " + std::to_string(p.anchor) +
           ", \"start\": " + point(p.start) + ", \"z_start\": " + format_fixed(p.z_start) +
           ", \"theta_start\": " + format_fixed(p.theta_start) + ", \"end\": " + point(p.end) +
           ", \"z_end\": " + format_fixed(p.z_end) + ", \"theta_end\": " + format_fixed(p.theta_end) + "}";
}

std::string stack_json(const StackAction& s) {
    return "{\"lifted\": " + std::to_string(s.lifted) + ", \"base\": " + std::to_string(s.base) +
           ", \"lift\": " + grasp_json(s.lift) + ", \"place\": " + point(s.place) +
           ", \"z_place\": " + format_fixed(s.z_place) + ", \"theta_place\": " + format_fixed(s.theta_place) + "}";
}

struct ParamsWriter {
    std::string operator()(const GraspAction& g) const { return grasp_json(g); }
    std::string operator()(const PullGrasp& pg) const {
        return "{\"pull\": " + pull_json(pg.pull) + ", \"grasp\": " + grasp_json(pg.grasp) + "}";
    }
    std::string operator()(const StackGrasp& sg) const {
        std::string stacks = "[";
        for (std::size_t i = 0; i < sg.stacks.size(); ++i) {
            if (i) stacks += ", ";
            stacks += stack_json(sg.stacks[i]);
        }
        return "{\"stacks\": " + stacks + "], \"grasp\": " + grasp_json(sg.grasp) + "}";
    }
};

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, "scene: " + what); }

const json& field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) schema(std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) schema(where + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema(where + " must be finite");
    return d;
}

geom::Point2 pair_of(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) schema(where + " must be a two-element array");
    return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
}

}  // namespace

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string scene_to_json(const SceneState& state) {
    std::string out = "{\n";
    out += "  \"workspace\": [" + format_fixed(state.workspace.width) + ", " + format_fixed(state.workspace.height) +
           "],\n";
    out += "  \"seed\": " + std::to_string(state.seed) + ",\n";
    out += "  \"tier\": \"" + std::string(to_string(state.tier)) + "\",\n";
    out += "  \"stacks\": [";
    for (std::size_t i = 0; i < state.stacks.size(); ++i) {
        const Stack& s = state.stacks[i];
        out += i ? ",\n" : "\n";
        out += "    {\"base\": " + point(s.base) + ", \"dishes\": [";
        for (std::size_t j = 0; j < s.dishes.size(); ++j) {
            const Dish& d = s.dishes[j];
            if (j) out += ", ";
            out += "{\"id\": " + std::to_string(d.id) + ", \"kind\": \"" + std::string(to_string(d.kind)) + "\"";
            if (d.kind == DishKind::Utensil) out += ", \"theta\": " + format_fixed(d.theta);
            out += "}";
        }
        out += "]}";
    }
    out += state.stacks.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

SceneState scene_from_json(std::string_view text, const DishSpecs& specs) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        schema(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) schema("top level must be an object");

    SceneState state;
    const geom::Point2 ws = pair_of(field(doc, "workspace"), "workspace");
    if (!(ws.x > 0 && ws.y > 0)) schema("workspace dimensions must be positive");
    state.workspace = {ws.x, ws.y};

    const json& seed = field(doc, "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
        schema("seed must be a non-negative integer");
    }
    state.seed = seed.get<std::uint64_t>();

    const json& tier = field(doc, "tier");
    if (!tier.is_string()) schema("tier must be a string");
    auto t = parse_tier(tier.get<std::string>());
    if (!t) schema("unknown tier '" + tier.get<std::string>() + "'");
    state.tier = *t;

    const json& stacks = field(doc, "stacks");
    if (!stacks.is_array()) schema("stacks must be an array");
    for (std::size_t i = 0; i < stacks.size(); ++i) {
        const std::string where = "stacks[" + std::to_string(i) + "]";
        const json& s = stacks[i];
        if (!s.is_object()) schema(where + " must be an object");
        Stack stack;
        stack.base = pair_of(field(s, "base"), where + ".base");
        const json& dishes = field(s, "dishes");
        if (!dishes.is_array() || dishes.empty()) schema(where + ".dishes must be a non-empty array");
        for (std::size_t j = 0; j < dishes.size(); ++j) {
            const std::string dw = where + ".dishes[" + std::to_string(j) + "]";
            const json& d = dishes[j];
            if (!d.is_object()) schema(dw + " must be an object");
            const json& id = field(d, "id");
            if (!id.is_number_integer()) schema(dw + ".id must be an integer");
            const json& kind = field(d, "kind");
            if (!kind.is_string()) schema(dw + ".kind must be a string");
            auto k = parse_dish_kind(kind.get<std::string>());
            if (!k) schema(dw + ".kind '" + kind.get<std::string>() + "' is not cup, bowl or utensil");
            Dish dish{id.get<int>(), *k, 0.0};
            if (auto th = d.find("theta"); th != d.end()) dish.theta = number(*th, dw + ".theta");
            else if (*k == DishKind::Utensil) schema(dw + " is a utensil without theta");
            stack.dishes.push_back(dish);
        }
        state.stacks.push_back(std::move(stack));
    }

    const auto problems = validate(state, specs);
    if (!problems.empty()) {
        std::string msg = "invalid scene:";
        for (const auto& p : problems) msg += " " + p + ";";
        msg.pop_back();
        schema(msg);
    }
    return state;
}

std::string trace_event_to_json(const TraceEvent& e) {
    return "{\"t\": " + std::to_string(e.t) + ", \"action\": \"" + std::string(to_string(kind_of(e.action))) +
           "\", \"targets\": " + int_list(targets_of(e.action)) + ", \"moved_to_bin\": " + int_list(e.moved_to_bin) +
           ", \"trip\": " + (e.trip ? "true" : "false") + ", \"params\": " + std::visit(ParamsWriter{}, e.action) +
           ", \"failed\": " + (e.failed ? "true" : "false") + "}";
}

std::string trace_to_jsonl(const std::vector<TraceEvent>& events) {
    std::string out;
    for (const auto& e : events) out += trace_event_to_json(e) + "\n";
    return out;
}

std::string report_to_json(const TrialReport& r) {
    return "{\"scene_id\": " + json(r.scene_id).dump() + ", \"tier\": \"" + std::string(to_string(r.tier)) +
           "\", \"policy\": \"" + std::string(to_string(r.policy)) + "\", \"trips\": " + std::to_string(r.trips) +
           ", \"objects_cleared\": " + std::to_string(r.objects_cleared) + ", \"opt\": " + format_fixed(r.opt) +
           ", \"time_s\": " + format_fixed(r.time_s) + ", \"failures\": " + std::to_string(r.failures) +
           ", \"grasps\": " + std::to_string(r.counts.grasps) + ", \"pulls\": " + std::to_string(r.counts.pulls) +
           ", \"stacks\": " + std::to_string(r.counts.stacks) + "}";
}

}  // namespace declutter
