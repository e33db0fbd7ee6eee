#include "declutter/tableware.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "declutter/error.hpp"
#include "declutter/random.hpp"

namespace declutter {

using geom::Point2;

std::string_view to_string(DishKind kind) {
    switch (kind) {
        case DishKind::Cup: return "cup";
        case DishKind::Bowl: return "bowl";
        case DishKind::Utensil: return "utensil";
    }
    return "?";
}

std::optional<DishKind> parse_dish_kind(std::string_view name) {
    if (name == "cup") return DishKind::Cup;
    if (name == "bowl") return DishKind::Bowl;
    if (name == "utensil") return DishKind::Utensil;
    return std::nullopt;
}

geom::Footprint DishSpec::footprint(Point2 center, double theta) const {
    if (kind == DishKind::Utensil) return geom::OrientedRect{center, length, width, theta};
    return geom::Disc{center, radius};
}

const DishSpec& DishSpecs::of(DishKind kind) const {
    switch (kind) {
        case DishKind::Cup: return cup;
        case DishKind::Bowl: return bowl;
        case DishKind::Utensil: return utensil;
    }
    return cup;
}

bool Stack::all_of_kind(DishKind kind) const {
    return std::all_of(dishes.begin(), dishes.end(), [&](const Dish& d) { return d.kind == kind; });
}

std::vector<geom::Footprint> stack_footprints(const Stack& s, const DishSpecs& specs) {
    std::vector<geom::Footprint> out;
    out.reserve(s.dishes.size());
    for (const auto& d : s.dishes) out.push_back(specs.of(d.kind).footprint(s.base, d.theta));
    return out;
}

bool stacks_overlap(const Stack& a, const Stack& b, const DishSpecs& specs) {
    const auto fa = stack_footprints(a, specs);
    const auto fb = stack_footprints(b, specs);
    for (const auto& x : fa) {
        for (const auto& y : fb) {
            if (geom::overlaps(x, y)) return true;
        }
    }
    return false;
}

double stack_circumscribed_radius(const Stack& s, const DishSpecs& specs) {
    double r = 0.0;
    for (const auto& f : stack_footprints(s, specs)) r = std::max(r, geom::circumscribed_radius(f));
    return r;
}

double stack_top_lip_height(const Stack& s, const DishSpecs& specs) {
    double h = specs.of(s.bottom().kind).grasp_height;
    for (std::size_t i = 1; i < s.dishes.size(); ++i) h += specs.of(s.dishes[i].kind).nest_offset;
    return h;
}

double stack_rise(const Stack& s, const DishSpecs& specs) {
    return stack_top_lip_height(s, specs) - specs.of(s.bottom().kind).grasp_height;
}

std::string_view to_string(Tier tier) {
    switch (tier) {
        case Tier::T0Cups: return "T0Cups";
        case Tier::T0Bowls: return "T0Bowls";
        case Tier::T0Utensils: return "T0Utensils";
        case Tier::T1: return "T1";
        case Tier::T2: return "T2";
        case Tier::Custom: return "Custom";
    }
    return "?";
}

std::optional<Tier> parse_tier(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (Tier t : {Tier::T0Cups, Tier::T0Bowls, Tier::T0Utensils, Tier::T1, Tier::T2, Tier::Custom}) {
        std::string canon(to_string(t));
        std::transform(canon.begin(), canon.end(), canon.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (canon == lower) return t;
    }
    return std::nullopt;
}

TierConfig TierConfig::preset(Tier tier) {
    switch (tier) {
        case Tier::T0Cups: return {tier, 6, 0, 0, 0, 1};
        case Tier::T0Bowls: return {tier, 0, 6, 0, 0, 1};
        case Tier::T0Utensils: return {tier, 0, 0, 6, 0, 1};
        case Tier::T1: return {tier, 4, 4, 4, 0, 1};
        case Tier::T2: return {tier, 4, 4, 4, 4, 3};
        case Tier::Custom: break;
    }
    throw Error(ErrorCode::InvalidArgument, "no preset for tier Custom");
}

bool TierConfig::valid() const {
    return n_cups >= 0 && n_bowls >= 0 && n_utensils >= 0 && total() > 0 && max_intersections >= 0 &&
           max_initial_stack >= 1;
}

const Stack* SceneState::find(int stack_id) const {
    auto it = std::find_if(stacks.begin(), stacks.end(), [&](const Stack& s) { return s.id() == stack_id; });
    return it == stacks.end() ? nullptr : &*it;
}

Stack* SceneState::find(int stack_id) {
    return const_cast<Stack*>(std::as_const(*this).find(stack_id));
}

std::size_t SceneState::dishes_on_table() const {
    return std::accumulate(stacks.begin(), stacks.end(), std::size_t{0},
                           [](std::size_t n, const Stack& s) { return n + s.size(); });
}

std::size_t SceneState::dish_count() const { return dishes_on_table() + bin.size(); }

namespace {

// Snaps to the 1e-6 grid used by the scene file so that a written scene
// reads back bit-identical.
double quantize_within(double v, double lo, double hi) {
    const double q = std::round(v * 1e6) / 1e6;
    const double qlo = std::ceil(lo * 1e6) / 1e6;
    const double qhi = std::floor(hi * 1e6) / 1e6;
    return std::clamp(q, qlo, qhi);
}

bool inside(const Stack& s, const Workspace& ws, const DishSpecs& specs) {
    const auto fps = stack_footprints(s, specs);
    return std::all_of(fps.begin(), fps.end(),
                       [&](const geom::Footprint& f) { return geom::inside_workspace(f, ws.width, ws.height); });
}

}  // namespace

SceneState generate_scene(const TierConfig& cfg, std::uint64_t seed, const DishSpecs& specs,
                          const Workspace& workspace) {
    if (!cfg.valid()) throw Error(ErrorCode::InvalidArgument, "invalid tier configuration");

    SceneState state;
    state.workspace = workspace;
    state.tier = cfg.tier;
    state.seed = seed;

    std::vector<Dish> dishes;
    int next_id = 0;
    for (auto [kind, n] : {std::pair{DishKind::Cup, cfg.n_cups}, std::pair{DishKind::Bowl, cfg.n_bowls},
                           std::pair{DishKind::Utensil, cfg.n_utensils}}) {
        for (int i = 0; i < n; ++i) dishes.push_back({next_id++, kind, 0.0});
    }

    // Dishes go down in listing order: cups, bowls, then utensils.
    Rng rng(seed);
    int intersections = 0;
    for (Dish dish : dishes) {
        const DishSpec& spec = specs.of(dish.kind);
        bool placed = false;
        for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
            if (dish.kind == DishKind::Utensil) {
                dish.theta = std::floor(rng.uniform(0.0, std::numbers::pi) * 1e6) / 1e6;
            }
            const double inset = geom::circumscribed_radius(spec.footprint({}, dish.theta));
            const Point2 p{quantize_within(rng.uniform(inset, workspace.width - inset), inset, workspace.width - inset),
                           quantize_within(rng.uniform(inset, workspace.height - inset), inset,
                                           workspace.height - inset)};
            Stack candidate{p, {dish}};

            std::vector<std::size_t> hits;
            for (std::size_t i = 0; i < state.stacks.size(); ++i) {
                if (stacks_overlap(candidate, state.stacks[i], specs)) hits.push_back(i);
            }
            if (hits.empty()) {
                state.stacks.push_back(std::move(candidate));
                placed = true;
                continue;
            }
            if (hits.size() != 1 || intersections >= cfg.max_intersections) continue;

            Stack& target = state.stacks[hits.front()];
            if (static_cast<int>(target.size()) + 1 > cfg.max_initial_stack) continue;
            if (spec.effective_radius() > specs.of(target.top().kind).effective_radius()) continue;

            Stack merged = target;
            merged.dishes.push_back(dish);
            if (!inside(merged, workspace, specs)) continue;
            bool clash = false;
            for (std::size_t i = 0; i < state.stacks.size() && !clash; ++i) {
                clash = i != hits.front() && stacks_overlap(merged, state.stacks[i], specs);
            }
            if (clash) continue;
            target = std::move(merged);
            ++intersections;
            placed = true;
        }
        if (!placed) {
            throw Error(ErrorCode::PlacementExhausted,
                        "could not place " + std::string(to_string(dish.kind)) + " " + std::to_string(dish.id) +
                            " after " + std::to_string(kMaxPlacementAttempts) + " samples");
        }
    }
    return state;
}

std::vector<std::string> validate(const SceneState& state, const DishSpecs& specs) {
    std::vector<std::string> out;
    std::set<int> seen;
    bool duplicate = false;
    auto note = [&](int id) { duplicate |= !seen.insert(id).second; };
    for (const auto& d : state.bin) note(d.id);

    for (const auto& s : state.stacks) {
        if (s.dishes.empty()) {
            out.emplace_back("empty stack");
            continue;
        }
        for (const auto& d : s.dishes) note(d.id);
        bool stable = true;
        bool theta_ok = true;
        for (std::size_t i = 0; i < s.dishes.size(); ++i) {
            const auto& d = s.dishes[i];
            if (d.kind == DishKind::Utensil && !(d.theta >= 0.0 && d.theta < std::numbers::pi)) theta_ok = false;
            if (i > 0 && specs.of(d.kind).effective_radius() > specs.of(s.dishes[i - 1].kind).effective_radius()) {
                stable = false;
            }
        }
        if (!stable) out.emplace_back("stack stability violated");
        if (!theta_ok) out.emplace_back("utensil orientation out of range");
        if (!inside(s, state.workspace, specs)) out.emplace_back("out of workspace");
    }
    if (duplicate) out.emplace_back("duplicate dish id");

    for (std::size_t i = 0; i < state.stacks.size(); ++i) {
        for (std::size_t j = i + 1; j < state.stacks.size(); ++j) {
            if (state.stacks[i].dishes.empty() || state.stacks[j].dishes.empty()) continue;
            if (stacks_overlap(state.stacks[i], state.stacks[j], specs)) {
                out.emplace_back("singulation violated");
            }
        }
    }
    return out;
}

int count_intersections(const SceneState& state) {
    int n = 0;
    for (const auto& s : state.stacks) n += static_cast<int>(s.size()) - 1;
    return n;
}

}  // namespace declutter
