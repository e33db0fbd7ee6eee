#pragma once

// Manipulation actions, their feasibility predicates, and the state
// transition function.

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "declutter/geometry2d.hpp"
#include "declutter/random.hpp"
#include "declutter/tableware.hpp"

namespace declutter {

/// Parallel-jaw gripper.
struct GripperSpec {
    double max_opening = 8.5;
    double jaw_height = 4.5;
    double closed_width = 2.0;
    double height_similarity_threshold = 1.0;
    double clearance_margin = 1.0;  ///< added to the mover radius for pull corridors

    bool valid() const {
        return max_opening > 0 && jaw_height > 0 && closed_width > 0 && closed_width < max_opening &&
               height_similarity_threshold > 0 && clearance_margin >= 0;
    }
};

struct SimParams {
    DishSpecs dishes;
    GripperSpec gripper;
};

/// Top-down grasp centered at `point`, closing along `theta`.
struct GraspAction {
    geom::Point2 point;
    double z = 0.0;
    double theta = 0.0;
    std::vector<int> targets;  ///< one or two stack ids
};

/// Drag `mover` from `start` (its center) until it touches `anchor`.
struct PullAction {
    geom::Point2 start;
    double z_start = 0.0;
    double theta_start = 0.0;
    geom::Point2 end;
    double z_end = 0.0;
    double theta_end = 0.0;
    int mover = -1;
    int anchor = -1;
};

/// Lift `lifted` with `lift` and set it down centered on `base`.
struct StackAction {
    GraspAction lift;
    geom::Point2 place;
    double z_place = 0.0;
    double theta_place = 0.0;
    int lifted = -1;
    int base = -1;
};

struct PullGrasp {
    PullAction pull;
    GraspAction grasp;
};

/// One or more stack placements onto the same base, then a grasp of the
/// merged pile. Only the utensil-gathering mode of the stack policy places
/// more than one.
struct StackGrasp {
    std::vector<StackAction> stacks;
    GraspAction grasp;
};

using Action = std::variant<GraspAction, PullGrasp, StackGrasp>;

enum class ActionKind { Grasp, PullGrasp, StackGrasp };

ActionKind kind_of(const Action& a);
std::string_view to_string(ActionKind kind);
/// Every stack id the action touches, in action order.
std::vector<int> targets_of(const Action& a);

struct TraceEvent {
    std::size_t t = 0;
    Action action;
    std::vector<int> moved_to_bin;  ///< dish ids
    bool trip = false;
    bool failed = false;
};

/// Analytic grasp on a stack: a uniformly sampled point on the bottom
/// dish's rim with the gripper closing radially, or the utensil center
/// with the gripper across its axis.
GraspAction grasp_points(const SceneState& state, int stack_id, Rng& rng, const DishSpecs& specs);

/// Closest pair of grasp points between two stacks (rim circles for cups
/// and bowls, the long axis for utensils).
std::pair<geom::Point2, geom::Point2> nearest_grasp_points(const Stack& a, const Stack& b, const DishSpecs& specs);

/// Two-stack grasp when lip heights are similar and the grasp points are
/// closer than the gripper opening; nullopt otherwise.
std::optional<GraspAction> mog_witness(const SceneState& state, int a, int b, const SimParams& params);
bool mog_allowable(const SceneState& state, int a, int b, const SimParams& params);

/// Mover center at first contact when translated straight toward the anchor.
geom::Point2 pull_contact_point(const Stack& mover, const Stack& anchor, const DishSpecs& specs);

/// Stacks that would each block the pull on their own (corridor or final
/// mover footprint), or nullopt when the pull fails regardless of
/// obstacles (dissimilar heights, or no multi-object grasp after contact).
/// pull_allowable holds iff the result is an empty list.
std::optional<std::vector<int>> pull_blockers(const SceneState& state, int mover, int anchor,
                                              const SimParams& params);

bool pull_allowable(const SceneState& state, int mover, int anchor, const SimParams& params);

/// Throws Error(InfeasibleAction) unless pull_allowable holds.
PullAction plan_pull(const SceneState& state, int mover, int anchor, const SimParams& params);

bool stack_allowable(const SceneState& state, int lifted, int base, const SimParams& params);

StackAction plan_stack(const SceneState& state, int lifted, int base, Rng& rng, const SimParams& params);

/// State after the pull motion only (mover translated, nothing binned).
SceneState after_pull(const SceneState& state, const PullAction& pull);

/// State after placing `lifted` onto `base`; the merged stack keeps base's id.
SceneState after_stack(const SceneState& state, int lifted, int base);

enum class Outcome { Success, Failure };

struct Transition {
    SceneState state;
    TraceEvent event;
};

/// Executes one action. On Failure a single grasp leaves the table
/// untouched and makes no trip; a two-target action still makes its trip
/// but delivers only the anchor (pull), the base (stack) or the first
/// target (multi-object grasp).
///
/// Throws Error(InfeasibleAction) naming the violated predicate.
Transition apply(const SceneState& state, const Action& action, const SimParams& params,
                 Outcome outcome = Outcome::Success, std::size_t index = 0);

}  // namespace declutter
