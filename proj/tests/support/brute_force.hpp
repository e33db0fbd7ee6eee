#pragma once

// Exhaustive search over action sequences for tiny scenes.

#include <vector>

#include "declutter/action_model.hpp"

namespace testing {

using namespace declutter;

/// A primitive the simulator could execute now, named by kind and stack ids.
/// Grasp: 1 or 2 targets. PullGrasp: {mover, anchor}. StackGrasp: lifted
/// stacks in placement order followed by the base.
struct Move {
    ActionKind kind;
    std::vector<int> ids;
    bool operator==(const Move&) const = default;
};

/// Every feasible move, including stack-grasps that place several stacks
/// on one base in sequence.
std::vector<Move> feasible_moves(const SceneState& state, const SimParams& params);

/// The move an emitted action corresponds to.
Move move_of(const Action& action);

/// Fewest trips that clear the table, trying every move sequence. Without
/// stacking only grasps and pull-grasps are tried.
int min_trips(const SceneState& state, const SimParams& params, bool stacking = true);

}  // namespace testing
