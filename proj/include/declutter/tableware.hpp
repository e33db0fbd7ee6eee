#pragma once

// Dishes, stacks, scenes and the tiered scene generator.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "declutter/geometry2d.hpp"

namespace declutter {

enum class DishKind { Cup, Bowl, Utensil };

std::string_view to_string(DishKind kind);
std::optional<DishKind> parse_dish_kind(std::string_view name);

/// Physical description of one kind of dish. Cups and bowls use `radius`;
/// utensils use `length` x `width`.
struct DishSpec {
    DishKind kind = DishKind::Cup;
    double radius = 0.0;
    double length = 0.0;
    double width = 0.0;
    double grasp_height = 0.0;  ///< lip height of the dish resting on the table
    double nest_offset = 0.0;   ///< rise added when this dish nests on another

    /// Radius used by the stacking order: disc radius, or utensil width.
    double effective_radius() const { return kind == DishKind::Utensil ? width : radius; }

    geom::Footprint footprint(geom::Point2 center, double theta) const;
};

struct DishSpecs {
    DishSpec cup{DishKind::Cup, 4.5, 0.0, 0.0, 9.0, 2.0};
    DishSpec bowl{DishKind::Bowl, 8.5, 0.0, 0.0, 5.0, 2.0};
    DishSpec utensil{DishKind::Utensil, 0.0, 17.0, 1.8, 2.0, 0.5};

    const DishSpec& of(DishKind kind) const;
};

struct Workspace {
    double width = 78.0;
    double height = 61.0;
};

struct Dish {
    int id = 0;
    DishKind kind = DishKind::Cup;
    double theta = 0.0;  ///< meaningful for utensils only, in [0, pi)
};

/// Pile of dishes sharing one base position, bottom first.
struct Stack {
    geom::Point2 base;
    std::vector<Dish> dishes;

    /// Stacks are identified by their bottom dish.
    int id() const { return dishes.front().id; }
    const Dish& bottom() const { return dishes.front(); }
    const Dish& top() const { return dishes.back(); }
    std::size_t size() const { return dishes.size(); }
    bool all_of_kind(DishKind kind) const;
};

/// Union of the member footprints, all centered at the base.
std::vector<geom::Footprint> stack_footprints(const Stack& s, const DishSpecs& specs);
bool stacks_overlap(const Stack& a, const Stack& b, const DishSpecs& specs);
double stack_circumscribed_radius(const Stack& s, const DishSpecs& specs);

/// Height of the top dish's lip: bottom grasp height plus the nest offset
/// of every dish above it.
double stack_top_lip_height(const Stack& s, const DishSpecs& specs);

/// Lip height of the top dish measured from the bottom dish's lip.
double stack_rise(const Stack& s, const DishSpecs& specs);

enum class Tier { T0Cups, T0Bowls, T0Utensils, T1, T2, Custom };

std::string_view to_string(Tier tier);
/// Accepts the canonical names ("T0Cups", "T1", ...) case-insensitively.
std::optional<Tier> parse_tier(std::string_view name);

struct TierConfig {
    Tier tier = Tier::T1;
    int n_cups = 0;
    int n_bowls = 0;
    int n_utensils = 0;
    int max_intersections = 0;
    int max_initial_stack = 1;

    static TierConfig preset(Tier tier);
    int total() const { return n_cups + n_bowls + n_utensils; }
    bool valid() const;
};

struct SceneState {
    Workspace workspace;
    Tier tier = Tier::Custom;
    std::uint64_t seed = 0;
    std::vector<Stack> stacks;
    std::vector<Dish> bin;
    int trips_taken = 0;

    const Stack* find(int stack_id) const;
    Stack* find(int stack_id);
    std::size_t dish_count() const;  ///< table plus bin
    std::size_t dishes_on_table() const;
};

/// Places every dish at a uniformly sampled position inside the workspace.
/// A dish landing on exactly one existing stack is stacked on it when the
/// tier still allows an intersection and the radius ordering permits;
/// otherwise the position is resampled.
///
/// Throws Error(PlacementExhausted) after 10,000 rejected samples for one dish.
SceneState generate_scene(const TierConfig& cfg, std::uint64_t seed, const DishSpecs& specs = {},
                          const Workspace& workspace = {});

inline constexpr int kMaxPlacementAttempts = 10'000;

/// Describes every broken scene invariant; empty when the state is valid.
std::vector<std::string> validate(const SceneState& state, const DishSpecs& specs = {});

/// Number of dish pairs placed on top of another object during generation,
/// i.e. dishes that are not at the bottom of their stack.
int count_intersections(const SceneState& state);

}  // namespace declutter
