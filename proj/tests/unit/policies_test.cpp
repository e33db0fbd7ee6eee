#include <doctest.h>

#include "builders.hpp"
#include "declutter/error.hpp"
#include "declutter/metrics_time.hpp"
#include "declutter/scene_io.hpp"

using namespace declutter;
using testing::add_stack;
using testing::scene_of;

namespace {

const SimParams P{};

PolicyConfig with(PolicyKind k, UtensilStacking u = UtensilStacking::OnePerBowl) { return {k, u, PairSelection::Lookahead}; }

int trips_of(const Trace& t) { return count_actions(t.events).trips; }

}  // namespace

TEST_CASE("policy names round-trip") {
    for (PolicyKind k : {PolicyKind::Random, PolicyKind::Pull, PolicyKind::Stack}) CHECK(parse_policy(to_string(k)) == k);
    CHECK_FALSE(parse_policy("greedy").has_value());
    CHECK(parse_utensil_stacking("all_on_one_bowl") == UtensilStacking::AllOnOneBowl);
    CHECK(parse_pair_selection("nearest_first") == PairSelection::NearestFirst);
}

TEST_CASE("random policy: six cups take six trips") {
    const auto s = generate_scene(TierConfig::preset(Tier::T0Cups), 5);
    const auto t = run_policy(s, with(PolicyKind::Random), P, 1);
    CHECK(trips_of(t) == 6);
    CHECK(opt(t.events) == doctest::Approx(1.0));
    Rng rng(0);
    CHECK_FALSE(random_policy(SceneState{}, rng, P).has_value());
}

TEST_CASE("random policy carries a whole stack when it picks one of its dishes") {
    SceneState s;
    add_stack(s, {DishKind::Bowl, DishKind::Cup, DishKind::Utensil}, 20, 20);
    add_stack(s, {DishKind::Cup}, 60, 45);
    int carried_three = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const auto a = random_policy(s, rng, P);
        REQUIRE(a.has_value());
        const auto tr = apply(s, *a, P);
        if (tr.event.moved_to_bin.size() == 3) ++carried_three;
        else CHECK(tr.event.moved_to_bin == std::vector<int>{3});
    }
    // Dish-uniform choice: three of four dishes sit in the stack.
    CHECK(carried_three > 25);
    CHECK(carried_three < 50);
}

TEST_CASE("pull policy: touching cups are grasped together first") {
    const auto s = scene_of({{DishKind::Bowl, 60, 45}, {DishKind::Cup, 10, 10}, {DishKind::Cup, 19, 10}});
    Rng rng(0);
    const auto a = pull_policy(s, rng, with(PolicyKind::Pull), P);
    REQUIRE(a.has_value());
    REQUIRE(std::holds_alternative<GraspAction>(*a));
    CHECK(std::get<GraspAction>(*a).targets.size() == 2);
    CHECK(targets_of(*a) == std::vector<int>{1, 2});
}

TEST_CASE("pull policy: four singulated bowls take two pull-grasps") {
    const auto s = scene_of(
        {{DishKind::Bowl, 12, 12}, {DishKind::Bowl, 40, 12}, {DishKind::Bowl, 12, 48}, {DishKind::Bowl, 40, 48}});
    const auto t = run_policy(s, with(PolicyKind::Pull), P, 3);
    REQUIRE(t.events.size() == 2);
    for (const auto& e : t.events) CHECK(kind_of(e.action) == ActionKind::PullGrasp);
    CHECK(opt(t.events) == doctest::Approx(2.0));
}

TEST_CASE("pull policy: a lone utensil gets a single grasp") {
    const auto s = scene_of({{DishKind::Utensil, 30, 30, 1.0}});
    Rng rng(0);
    const auto a = pull_policy(s, rng, with(PolicyKind::Pull), P);
    REQUIRE(a.has_value());
    CHECK(kind_of(*a) == ActionKind::Grasp);
    CHECK(targets_of(*a) == std::vector<int>{0});
}

TEST_CASE("stack policy: T1 one utensil per bowl gives six trips") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto s = generate_scene(TierConfig::preset(Tier::T1), seed);
        const auto t = run_policy(s, with(PolicyKind::Stack), P, seed);
        CHECK(trips_of(t) == 6);
        int utensil_on_bowl = 0;
        for (const auto& e : t.events) {
            if (const auto* sg = std::get_if<StackGrasp>(&e.action)) {
                CHECK(sg->stacks.size() == 1);
                utensil_on_bowl += e.moved_to_bin.size() == 2 && e.t < 4;
            }
        }
        CHECK(utensil_on_bowl == 4);
    }
}

TEST_CASE("stack policy: T1 all utensils on one bowl gives five trips") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto s = generate_scene(TierConfig::preset(Tier::T1), seed);
        const auto t = run_policy(s, with(PolicyKind::Stack, UtensilStacking::AllOnOneBowl), P, seed);
        CHECK(trips_of(t) == 5);
        CHECK(opt(t.events) == doctest::Approx(2.4));
        CHECK(t.events.front().moved_to_bin.size() == 5);
    }
}

TEST_CASE("stack policy: six cups take three stack-grasps") {
    const auto s = generate_scene(TierConfig::preset(Tier::T0Cups), 8);
    const auto t = run_policy(s, with(PolicyKind::Stack), P, 8);
    REQUIRE(t.events.size() == 3);
    for (const auto& e : t.events) CHECK(kind_of(e.action) == ActionKind::StackGrasp);
}

TEST_CASE("stack policy: two bowls and a cup take two trips") {
    const auto s = scene_of({{DishKind::Bowl, 12, 12}, {DishKind::Bowl, 60, 45}, {DishKind::Cup, 30, 40}});
    const auto t = run_policy(s, with(PolicyKind::Stack), P, 0);
    CHECK(trips_of(t) == 2);
    CHECK(opt(t.events) == doctest::Approx(1.5));
}

TEST_CASE("run_policy: T0Bowls with stacking is three trips") {
    const auto s = generate_scene(TierConfig::preset(Tier::T0Bowls), 21);
    CHECK(trips_of(run_policy(s, with(PolicyKind::Stack), P, 0)) == 3);
}

TEST_CASE("run_policy: random clears every tier") {
    for (Tier tier : {Tier::T0Cups, Tier::T0Bowls, Tier::T0Utensils, Tier::T1, Tier::T2}) {
        const auto s = generate_scene(TierConfig::preset(tier), 17);
        const auto t = run_policy(s, with(PolicyKind::Random), P, 17);
        CHECK(t.final_state.stacks.empty());
        CHECK(t.final_state.bin.size() == s.dish_count());
    }
}

TEST_CASE("run_policy: T1 pull never beats the planned minimum and usually pairs everything") {
    int six = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto s = generate_scene(TierConfig::preset(Tier::T1), seed);
        const auto t = run_policy(s, with(PolicyKind::Pull), P, seed);
        const auto best = min_pull_trips(s, P);
        REQUIRE(best.has_value());
        // A grasp always wins over a pull, even when it costs a later trip.
        CHECK(trips_of(t) >= *best);
        for (const auto& e : t.events) {
            if (e.moved_to_bin.size() != 2) continue;
            // Height similarity forces same-kind pairs.
            const auto& d = t.final_state.bin;
            auto kind = [&](int id) {
                return std::find_if(d.begin(), d.end(), [&](const Dish& x) { return x.id == id; })->kind;
            };
            CHECK(kind(e.moved_to_bin[0]) == kind(e.moved_to_bin[1]));
        }
        six += trips_of(t) == 6;
    }
    CHECK(six >= 30);
}

TEST_CASE("run_policy rejects an invalid scene and is deterministic") {
    const auto bad = scene_of({{DishKind::Cup, 10, 10}, {DishKind::Cup, 12, 10}});
    CHECK_THROWS_AS(run_policy(bad, with(PolicyKind::Pull), P, 0), Error);

    const auto s = generate_scene(TierConfig::preset(Tier::T2), 4);
    for (PolicyKind k : {PolicyKind::Random, PolicyKind::Pull, PolicyKind::Stack}) {
        const auto a = run_policy(s, with(k), P, 9, {0.2, 0});
        const auto b = run_policy(s, with(k), P, 9, {0.2, 0});
        CHECK(trace_to_jsonl(a.events) == trace_to_jsonl(b.events));
    }
}

TEST_CASE("pairs_nearest_first orders by base distance") {
    const auto s = scene_of({{DishKind::Cup, 10, 10}, {DishKind::Cup, 60, 10}, {DishKind::Cup, 25, 10}});
    const auto pairs = pairs_nearest_first(s);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0] == std::pair{0, 2});
    CHECK(pairs[1] == std::pair{1, 2});
    CHECK(pairs[2] == std::pair{0, 1});
}

TEST_CASE("nearest-first pull selection is still a valid policy") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = generate_scene(TierConfig::preset(Tier::T1), seed);
        const auto t = run_policy(s, {PolicyKind::Pull, UtensilStacking::OnePerBowl, PairSelection::NearestFirst}, P, seed);
        CHECK(t.final_state.stacks.empty());
        CHECK(trips_of(t) <= 12);
    }
}
