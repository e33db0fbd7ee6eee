#include "declutter/policies.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <tuple>

#include "declutter/error.hpp"

namespace declutter {

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Random: return "random";
        case PolicyKind::Pull: return "pull";
        case PolicyKind::Stack: return "stack";
    }
    return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
    if (name == "random") return PolicyKind::Random;
    if (name == "pull") return PolicyKind::Pull;
    if (name == "stack") return PolicyKind::Stack;
    return std::nullopt;
}

std::string_view to_string(UtensilStacking mode) {
    return mode == UtensilStacking::OnePerBowl ? "one_per_bowl" : "all_on_one_bowl";
}

std::optional<UtensilStacking> parse_utensil_stacking(std::string_view name) {
    if (name == "one_per_bowl") return UtensilStacking::OnePerBowl;
    if (name == "all_on_one_bowl") return UtensilStacking::AllOnOneBowl;
    return std::nullopt;
}

std::string_view to_string(PairSelection mode) {
    return mode == PairSelection::NearestFirst ? "nearest_first" : "lookahead";
}

std::optional<PairSelection> parse_pair_selection(std::string_view name) {
    if (name == "nearest_first") return PairSelection::NearestFirst;
    if (name == "lookahead") return PairSelection::Lookahead;
    return std::nullopt;
}

std::vector<std::pair<int, int>> pairs_nearest_first(const SceneState& state) {
    struct Candidate {
        double d;
        int a, b;
    };
    std::vector<Candidate> all;
    for (std::size_t i = 0; i < state.stacks.size(); ++i) {
        for (std::size_t j = i + 1; j < state.stacks.size(); ++j) {
            int a = state.stacks[i].id(), b = state.stacks[j].id();
            if (a > b) std::swap(a, b);
            all.push_back({geom::distance(state.stacks[i].base, state.stacks[j].base), a, b});
        }
    }
    std::sort(all.begin(), all.end(),
              [](const Candidate& x, const Candidate& y) { return std::tie(x.d, x.a, x.b) < std::tie(y.d, y.a, y.b); });
    std::vector<std::pair<int, int>> out;
    out.reserve(all.size());
    for (const auto& c : all) out.emplace_back(c.a, c.b);
    return out;
}

namespace {

Action single_grasp(const SceneState& state, Rng& rng, const SimParams& params) {
    const auto lowest = std::min_element(state.stacks.begin(), state.stacks.end(),
                                         [](const Stack& a, const Stack& b) { return a.id() < b.id(); });
    return grasp_points(state, lowest->id(), rng, params.dishes);
}

// Lift order preference: smaller bottom dish, then fewer dishes, then id.
bool lift_before(const Stack& a, const Stack& b, const DishSpecs& specs) {
    const auto key = [&](const Stack& s) {
        return std::make_tuple(specs.of(s.bottom().kind).effective_radius(), s.size(), s.id());
    };
    return key(a) < key(b);
}

StackGrasp make_stack_grasp(const SceneState& state, const std::vector<int>& lifted, int base, Rng& rng,
                            const SimParams& params) {
    StackGrasp sg;
    SceneState merged = state;
    for (int id : lifted) {
        sg.stacks.push_back(plan_stack(merged, id, base, rng, params));
        merged = after_stack(merged, id, base);
    }
    sg.grasp = grasp_points(merged, base, rng, params.dishes);
    return sg;
}

PullGrasp make_pull_grasp(const SceneState& state, int mover, int anchor, const SimParams& params) {
    PullGrasp pg;
    pg.pull = plan_pull(state, mover, anchor, params);
    pg.grasp = *mog_witness(after_pull(state, pg.pull), mover, anchor, params);
    return pg;
}

// Minimum trips over subsets of the current stacks when each action
// removes one stack or one pair. A pair is removable in subset S when it
// admits a multi-object grasp outright, or a pull whose blockers all lie
// outside S.
class PairRemovalPlanner {
public:
    PairRemovalPlanner(const SceneState& state, const SimParams& params) {
        const std::size_t n = state.stacks.size();
        for (const auto& s : state.stacks) ids_.push_back(s.id());
        options_.assign(n * n, {});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                auto& opts = options_[i * n + j];
                if (mog_allowable(state, ids_[i], ids_[j], params)) {
                    opts.push_back(0);
                    continue;
                }
                for (auto [m, a] : {std::pair{i, j}, std::pair{j, i}}) {
                    if (auto blockers = pull_blockers(state, ids_[m], ids_[a], params)) opts.push_back(mask_of(*blockers));
                }
            }
        }
        best_.assign(std::size_t{1} << n, 0);
        // Removal order matters (a pull may wait for its blockers to go), so
        // every available action is tried from every subset.
        for (std::uint32_t set = 1; set < best_.size(); ++set) {
            int b = std::numeric_limits<int>::max();
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint32_t bi = std::uint32_t{1} << i;
                if (!(set & bi)) continue;
                b = std::min(b, best_[set ^ bi] + 1);
                for (std::size_t j = i + 1; j < n; ++j) {
                    const std::uint32_t bj = std::uint32_t{1} << j;
                    if (!(set & bj)) continue;
                    for (std::uint32_t need_clear : options_[i * n + j]) {
                        if ((need_clear & set) == 0) {
                            b = std::min(b, best_[set ^ bi ^ bj] + 1);
                            break;
                        }
                    }
                }
            }
            best_[set] = static_cast<std::uint8_t>(b);
        }
    }

    int min_trips() const { return best_.back(); }

    bool keeps_optimal(std::initializer_list<int> removed) const {
        const std::uint32_t full = static_cast<std::uint32_t>(best_.size() - 1);
        return best_[full ^ mask_of(removed)] + 1 == best_[full];
    }

private:
    template <typename Range>
    std::uint32_t mask_of(const Range& stack_ids) const {
        std::uint32_t m = 0;
        for (int id : stack_ids) {
            const auto it = std::find(ids_.begin(), ids_.end(), id);
            m |= std::uint32_t{1} << static_cast<std::uint32_t>(it - ids_.begin());
        }
        return m;
    }

    std::vector<int> ids_;
    std::vector<std::vector<std::uint32_t>> options_;
    std::vector<std::uint8_t> best_;
};

bool is_utensil_stack(const Stack& s) { return s.all_of_kind(DishKind::Utensil); }
bool is_bowl_stack(const Stack& s) { return s.bottom().kind == DishKind::Bowl; }

}  // namespace

std::optional<Action> random_policy(const SceneState& state, Rng& rng, const SimParams& params) {
    const std::size_t n = state.dishes_on_table();
    if (n == 0) return std::nullopt;
    std::size_t pick = rng.index(n);
    for (const auto& s : state.stacks) {
        if (pick < s.size()) return grasp_points(state, s.id(), rng, params.dishes);
        pick -= s.size();
    }
    return std::nullopt;
}

std::optional<Action> pull_policy(const SceneState& state, Rng& rng, const PolicyConfig& cfg,
                                  const SimParams& params) {
    if (state.stacks.empty()) return std::nullopt;
    const auto pairs = pairs_nearest_first(state);
    std::optional<PairRemovalPlanner> planner;
    if (cfg.pair_selection == PairSelection::Lookahead && state.stacks.size() <= kMaxPlannedStacks) {
        planner.emplace(state, params);
    }
    auto keeps_optimal = [&](std::initializer_list<int> ids) { return !planner || planner->keeps_optimal(ids); };

    std::optional<GraspAction> first_mog;
    for (auto [a, b] : pairs) {
        auto g = mog_witness(state, a, b, params);
        if (!g) continue;
        if (keeps_optimal({a, b})) return *g;
        if (!first_mog) first_mog = std::move(g);
    }
    if (first_mog) return *first_mog;

    std::optional<std::pair<int, int>> first_pull;
    for (auto [a, b] : pairs) {
        const Stack& sa = *state.find(a);
        const Stack& sb = *state.find(b);
        // Drag the smaller stack toward the larger one first.
        const bool a_moves = stack_circumscribed_radius(sa, params.dishes) <= stack_circumscribed_radius(sb, params.dishes);
        for (auto [mover, anchor] : {a_moves ? std::pair{a, b} : std::pair{b, a}, a_moves ? std::pair{b, a} : std::pair{a, b}}) {
            if (!pull_allowable(state, mover, anchor, params)) continue;
            if (keeps_optimal({a, b})) return make_pull_grasp(state, mover, anchor, params);
            if (!first_pull) first_pull = {mover, anchor};
            break;
        }
    }
    if (first_pull) return make_pull_grasp(state, first_pull->first, first_pull->second, params);

    std::vector<int> ids;
    for (const auto& s : state.stacks) ids.push_back(s.id());
    std::sort(ids.begin(), ids.end());
    for (int id : ids) {
        if (keeps_optimal({id})) return grasp_points(state, id, rng, params.dishes);
    }
    return grasp_points(state, ids.front(), rng, params.dishes);
}

std::optional<int> min_pull_trips(const SceneState& state, const SimParams& params) {
    if (state.stacks.size() > kMaxPlannedStacks) return std::nullopt;
    return PairRemovalPlanner(state, params).min_trips();
}

std::optional<Action> stack_policy(const SceneState& state, Rng& rng, const PolicyConfig& cfg,
                                   const SimParams& params) {
    if (state.stacks.empty()) return std::nullopt;
    const auto pairs = pairs_nearest_first(state);

    // Utensils onto bowls.
    for (auto [a, b] : pairs) {
        const Stack& sa = *state.find(a);
        const Stack& sb = *state.find(b);
        int utensil = -1, bowl = -1;
        if (is_utensil_stack(sa) && is_bowl_stack(sb)) std::tie(utensil, bowl) = std::pair{a, b};
        else if (is_utensil_stack(sb) && is_bowl_stack(sa)) std::tie(utensil, bowl) = std::pair{b, a};
        else continue;
        if (!stack_allowable(state, utensil, bowl, params)) continue;

        std::vector<int> lifted{utensil};
        if (cfg.utensil_stacking == UtensilStacking::AllOnOneBowl) {
            const geom::Point2 bowl_base = state.find(bowl)->base;
            SceneState merged = after_stack(state, utensil, bowl);
            std::vector<std::pair<double, int>> rest;
            for (const auto& s : merged.stacks) {
                if (is_utensil_stack(s)) rest.emplace_back(geom::distance(s.base, bowl_base), s.id());
            }
            std::sort(rest.begin(), rest.end());
            for (auto [d, id] : rest) {
                if (!stack_allowable(merged, id, bowl, params)) continue;
                merged = after_stack(merged, id, bowl);
                lifted.push_back(id);
            }
        }
        return make_stack_grasp(state, lifted, bowl, rng, params);
    }

    // Any allowable pair, merged and carried off at once.
    for (auto [a, b] : pairs) {
        const Stack& sa = *state.find(a);
        const Stack& sb = *state.find(b);
        const bool a_lifts = lift_before(sa, sb, params.dishes);
        for (auto [lifted, base] : {a_lifts ? std::pair{a, b} : std::pair{b, a}, a_lifts ? std::pair{b, a} : std::pair{a, b}}) {
            if (stack_allowable(state, lifted, base, params)) {
                return make_stack_grasp(state, {lifted}, base, rng, params);
            }
        }
    }
    return single_grasp(state, rng, params);
}

std::optional<Action> next_action(const SceneState& state, Rng& rng, const PolicyConfig& cfg,
                                  const SimParams& params) {
    switch (cfg.kind) {
        case PolicyKind::Random: return random_policy(state, rng, params);
        case PolicyKind::Pull: return pull_policy(state, rng, cfg, params);
        case PolicyKind::Stack: return stack_policy(state, rng, cfg, params);
    }
    return std::nullopt;
}

Trace run_policy(const SceneState& initial, const PolicyConfig& policy, const SimParams& params, std::uint64_t seed,
                 const RunOptions& options) {
    if (const auto problems = validate(initial, params.dishes); !problems.empty()) {
        throw Error(ErrorCode::InvalidArgument, "invalid initial scene: " + problems.front());
    }
    if (options.p_fail < 0.0 || options.p_fail > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "p_fail must lie in [0, 1]");
    }
    const std::size_t cap = options.max_actions != 0 ? options.max_actions : 100 * initial.dish_count() + 100;

    Rng policy_rng(derive_seed({seed, 1}));
    Rng failure_rng(derive_seed({seed, 2}));
    Trace trace;
    SceneState state = initial;
    while (auto action = next_action(state, policy_rng, policy, params)) {
        if (trace.events.size() >= cap) {
            throw Error(ErrorCode::InvalidArgument,
                        "policy did not clear the table within " + std::to_string(cap) + " actions");
        }
        const Outcome outcome = failure_rng.bernoulli(options.p_fail) ? Outcome::Failure : Outcome::Success;
        auto tr = apply(state, *action, params, outcome, trace.events.size());
        if (tr.event.failed) ++trace.failures;
        trace.events.push_back(std::move(tr.event));
        state = std::move(tr.state);
    }
    trace.final_state = std::move(state);
    return trace;
}

}  // namespace declutter
