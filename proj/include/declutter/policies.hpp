#pragma once

// Decluttering policies and the closed-loop simulation that runs them.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "declutter/action_model.hpp"

namespace declutter {

enum class PolicyKind { Random, Pull, Stack };
enum class UtensilStacking { OnePerBowl, AllOnOneBowl };
/// NearestFirst takes the closest feasible pair. Lookahead scans pairs in
/// the same order but skips a pair-removal when a different choice would
/// clear the table in fewer trips.
enum class PairSelection { NearestFirst, Lookahead };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy(std::string_view name);
std::string_view to_string(UtensilStacking mode);
std::optional<UtensilStacking> parse_utensil_stacking(std::string_view name);
std::string_view to_string(PairSelection mode);
std::optional<PairSelection> parse_pair_selection(std::string_view name);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::Random;
    UtensilStacking utensil_stacking = UtensilStacking::OnePerBowl;
    PairSelection pair_selection = PairSelection::Lookahead;
};

/// Baseline: pick a dish uniformly at random and grasp the stack holding it.
std::optional<Action> random_policy(const SceneState& state, Rng& rng, const SimParams& params);

/// Multi-object grasps first, then pull-grasps, then single grasps.
std::optional<Action> pull_policy(const SceneState& state, Rng& rng, const PolicyConfig& cfg,
                                  const SimParams& params);

/// Fewest trips that clear the table using only single grasps, multi-object
/// grasps and pull-grasps, by dynamic programming over subsets of stacks.
/// Every such action removes its targets, so the reachable states are
/// exactly the subsets of the current stacks. Returns nullopt above
/// kMaxPlannedStacks stacks.
std::optional<int> min_pull_trips(const SceneState& state, const SimParams& params);

inline constexpr std::size_t kMaxPlannedStacks = 16;

/// Utensils onto bowls first, then any allowable stack-grasp, then single
/// grasps.
std::optional<Action> stack_policy(const SceneState& state, Rng& rng, const PolicyConfig& cfg,
                                   const SimParams& params);

/// Returns nullopt (done) iff the table is empty.
std::optional<Action> next_action(const SceneState& state, Rng& rng, const PolicyConfig& cfg,
                                  const SimParams& params);

/// Stack-id pairs (lower id first) ordered by base distance, ties by ids.
std::vector<std::pair<int, int>> pairs_nearest_first(const SceneState& state);

struct Trace {
    std::vector<TraceEvent> events;
    SceneState final_state;
    int failures = 0;
};

struct RunOptions {
    double p_fail = 0.0;
    /// Hard cap on loop iterations; 0 picks a generous bound from the dish count.
    std::size_t max_actions = 0;
};

/// Queries the policy and applies its actions until the table is clear.
/// Policy randomness and failure draws use separate streams derived from
/// `seed`, so the failure rate does not perturb policy choices directly.
///
/// Throws Error(InvalidArgument) for an invalid initial scene and
/// propagates Error(InfeasibleAction) from apply.
Trace run_policy(const SceneState& initial, const PolicyConfig& policy, const SimParams& params, std::uint64_t seed,
                 const RunOptions& options = {});

}  // namespace declutter
