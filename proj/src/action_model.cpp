#include "declutter/action_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "declutter/error.hpp"

namespace declutter {

using geom::Point2;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void infeasible(const std::string& predicate, int a, int b = -1) {
    std::string msg = predicate + "(" + std::to_string(a);
    if (b >= 0) msg += ", " + std::to_string(b);
    throw Error(ErrorCode::InfeasibleAction, "infeasible action: " + msg + ") is false");
}

const Stack& require(const SceneState& state, int id) {
    const Stack* s = state.find(id);
    if (s == nullptr) throw Error(ErrorCode::InfeasibleAction, "stack " + std::to_string(id) + " is not on the table");
    return *s;
}

bool heights_similar(const Stack& a, const Stack& b, const SimParams& p) {
    return std::abs(stack_top_lip_height(a, p.dishes) - stack_top_lip_height(b, p.dishes)) <=
           p.gripper.height_similarity_threshold;
}

// Grasp geometry of a stack is that of its bottom dish.
struct GraspShape {
    bool disc = true;
    Point2 center;
    double radius = 0.0;
    Point2 a0, a1;  // utensil axis
};

GraspShape shape_of(const Stack& s, const DishSpecs& specs) {
    const DishSpec& spec = specs.of(s.bottom().kind);
    GraspShape g;
    g.center = s.base;
    if (spec.kind == DishKind::Utensil) {
        g.disc = false;
        std::tie(g.a0, g.a1) = geom::axis_segment({s.base, spec.length, spec.width, s.bottom().theta});
    } else {
        g.radius = spec.radius;
    }
    return g;
}

Point2 closest_on_segment(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = geom::dot(ab, ab);
    if (len2 == 0.0) return a;
    return a + std::clamp(geom::dot(p - a, ab) / len2, 0.0, 1.0) * ab;
}

Point2 toward(Point2 center, Point2 p, double radius) {
    const Point2 d = p - center;
    const double n = geom::norm(d);
    if (n == 0.0) return center + Point2{radius, 0.0};
    return center + (radius / n) * d;
}

std::pair<Point2, Point2> segment_pair(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
    const Point2 r = a1 - a0;
    const Point2 s = b1 - b0;
    const double denom = geom::cross(r, s);
    if (denom != 0.0) {
        const double t = geom::cross(b0 - a0, s) / denom;
        const double u = geom::cross(b0 - a0, r) / denom;
        if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) {
            const Point2 x = a0 + t * r;
            return {x, x};
        }
    }
    std::pair<Point2, Point2> best{a0, closest_on_segment(a0, b0, b1)};
    auto consider = [&](Point2 p, Point2 q) {
        if (geom::distance(p, q) < geom::distance(best.first, best.second)) best = {p, q};
    };
    consider(a1, closest_on_segment(a1, b0, b1));
    consider(closest_on_segment(b0, a0, a1), b0);
    consider(closest_on_segment(b1, a0, a1), b1);
    return best;
}

// Nearest rim point of a circle to a segment, paired with the segment point.
std::pair<Point2, Point2> rim_segment_pair(Point2 c, double r, Point2 s0, Point2 s1) {
    const Point2 q = closest_on_segment(c, s0, s1);
    const double dmin = geom::distance(q, c);
    if (dmin >= r) return {toward(c, q, r), q};
    const Point2 far = geom::distance(s0, c) >= geom::distance(s1, c) ? s0 : s1;
    const double dmax = geom::distance(far, c);
    if (dmax <= r) return {toward(c, far, r), far};
    // The segment crosses the rim between q and the far endpoint.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (geom::distance(q + mid * (far - q), c) < r ? lo : hi) = mid;
    }
    const Point2 x = q + hi * (far - q);
    return {x, x};
}

bool all_discs(const Stack& s) {
    return std::none_of(s.dishes.begin(), s.dishes.end(), [](const Dish& d) { return d.kind == DishKind::Utensil; });
}

double max_disc_radius(const Stack& s, const DishSpecs& specs) {
    double r = 0.0;
    for (const auto& d : s.dishes) r = std::max(r, specs.of(d.kind).radius);
    return r;
}

bool footprints_overlap(const std::vector<geom::Footprint>& a, const std::vector<geom::Footprint>& b) {
    for (const auto& x : a) {
        for (const auto& y : b) {
            if (geom::overlaps(x, y)) return true;
        }
    }
    return false;
}

std::vector<geom::Footprint> shifted(std::vector<geom::Footprint> fps, Point2 delta) {
    for (auto& f : fps) f = geom::translated(f, delta);
    return fps;
}

// Moves a stack to the bin.
void bin_stack(SceneState& st, int id, std::vector<int>& moved) {
    auto it = std::find_if(st.stacks.begin(), st.stacks.end(), [&](const Stack& s) { return s.id() == id; });
    for (const auto& d : it->dishes) {
        st.bin.push_back(d);
        moved.push_back(d.id);
    }
    st.stacks.erase(it);
}

}  // namespace

ActionKind kind_of(const Action& a) { return static_cast<ActionKind>(a.index()); }

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::Grasp: return "grasp";
        case ActionKind::PullGrasp: return "pull_grasp";
        case ActionKind::StackGrasp: return "stack_grasp";
    }
    return "?";
}

std::vector<int> targets_of(const Action& a) {
    if (const auto* g = std::get_if<GraspAction>(&a)) return g->targets;
    if (const auto* pg = std::get_if<PullGrasp>(&a)) return {pg->pull.mover, pg->pull.anchor};
    const auto& sg = std::get<StackGrasp>(a);
    std::vector<int> out;
    for (const auto& s : sg.stacks) out.push_back(s.lifted);
    if (!sg.stacks.empty()) out.push_back(sg.stacks.front().base);
    return out;
}

GraspAction grasp_points(const SceneState& state, int stack_id, Rng& rng, const DishSpecs& specs) {
    const Stack& s = require(state, stack_id);
    const Dish& bottom = s.bottom();
    const DishSpec& spec = specs.of(bottom.kind);
    GraspAction g;
    g.targets = {stack_id};
    g.z = spec.grasp_height;
    if (bottom.kind == DishKind::Utensil) {
        g.point = s.base;
        g.theta = geom::normalize_half_turn(bottom.theta + 0.5 * std::numbers::pi);
    } else {
        const auto rim = geom::rim_point(s.base, spec.radius, rng.uniform(0.0, kTwoPi));
        g.point = rim.point;
        g.theta = rim.gripper_theta;
    }
    return g;
}

std::pair<Point2, Point2> nearest_grasp_points(const Stack& a, const Stack& b, const DishSpecs& specs) {
    const GraspShape ga = shape_of(a, specs);
    const GraspShape gb = shape_of(b, specs);
    if (ga.disc && gb.disc) {
        const double d = geom::distance(ga.center, gb.center);
        if (d <= ga.radius + gb.radius) {
            // Rims meet or cross; both grasp points sit at the contact region.
            const Point2 m = toward(ga.center, gb.center, std::min(ga.radius, d));
            return {m, m};
        }
        return {toward(ga.center, gb.center, ga.radius), toward(gb.center, ga.center, gb.radius)};
    }
    if (ga.disc) return rim_segment_pair(ga.center, ga.radius, gb.a0, gb.a1);
    if (gb.disc) {
        auto [rim, seg] = rim_segment_pair(gb.center, gb.radius, ga.a0, ga.a1);
        return {seg, rim};
    }
    return segment_pair(ga.a0, ga.a1, gb.a0, gb.a1);
}

std::optional<GraspAction> mog_witness(const SceneState& state, int a, int b, const SimParams& params) {
    if (a == b) return std::nullopt;
    const Stack* sa = state.find(a);
    const Stack* sb = state.find(b);
    if (sa == nullptr || sb == nullptr || !heights_similar(*sa, *sb, params)) return std::nullopt;
    const auto [pa, pb] = nearest_grasp_points(*sa, *sb, params.dishes);
    if (!(geom::distance(pa, pb) < params.gripper.max_opening)) return std::nullopt;

    const Point2 across = pa == pb ? sb->base - sa->base : pb - pa;
    GraspAction g;
    g.point = 0.5 * (pa + pb);
    g.z = std::max(stack_top_lip_height(*sa, params.dishes), stack_top_lip_height(*sb, params.dishes));
    g.theta = geom::normalize_half_turn(std::atan2(across.y, across.x));
    g.targets = {a, b};
    return g;
}

bool mog_allowable(const SceneState& state, int a, int b, const SimParams& params) {
    return mog_witness(state, a, b, params).has_value();
}

Point2 pull_contact_point(const Stack& mover, const Stack& anchor, const DishSpecs& specs) {
    const Point2 d = anchor.base - mover.base;
    const double dist = geom::norm(d);
    if (dist == 0.0) return mover.base;
    const Point2 u = (1.0 / dist) * d;
    if (all_discs(mover) && all_discs(anchor)) {
        const double t = std::max(0.0, dist - max_disc_radius(mover, specs) - max_disc_radius(anchor, specs));
        return mover.base + t * u;
    }
    const auto fm = stack_footprints(mover, specs);
    const auto fa = stack_footprints(anchor, specs);
    if (footprints_overlap(fm, fa)) return mover.base;
    // Overlap along the approach line is an interval that contains `dist`
    // (centers coincide there), so bisection finds its lower end.
    double lo = 0.0, hi = dist;
    for (int i = 0; i < 64 && hi - lo > 1e-9; ++i) {
        const double mid = 0.5 * (lo + hi);
        (footprints_overlap(shifted(fm, mid * u), fa) ? hi : lo) = mid;
    }
    return mover.base + hi * u;
}

std::optional<std::vector<int>> pull_blockers(const SceneState& state, int mover, int anchor,
                                              const SimParams& params) {
    if (mover == anchor) return std::nullopt;
    const Stack* sm = state.find(mover);
    const Stack* sa = state.find(anchor);
    if (sm == nullptr || sa == nullptr || !heights_similar(*sm, *sa, params)) return std::nullopt;

    const Point2 end = pull_contact_point(*sm, *sa, params.dishes);
    PullAction probe;
    probe.mover = mover;
    probe.end = end;
    if (!mog_allowable(after_pull(state, probe), mover, anchor, params)) return std::nullopt;

    const double half_width = stack_circumscribed_radius(*sm, params.dishes) + params.gripper.clearance_margin;
    const auto moved = shifted(stack_footprints(*sm, params.dishes), end - sm->base);
    std::vector<int> blockers;
    for (const auto& s : state.stacks) {
        if (s.id() == mover || s.id() == anchor) continue;
        const auto fps = stack_footprints(s, params.dishes);
        if (!geom::corridor_clear(sm->base, end, half_width, fps) || footprints_overlap(moved, fps)) {
            blockers.push_back(s.id());
        }
    }
    return blockers;
}

bool pull_allowable(const SceneState& state, int mover, int anchor, const SimParams& params) {
    const auto blockers = pull_blockers(state, mover, anchor, params);
    return blockers && blockers->empty();
}

PullAction plan_pull(const SceneState& state, int mover, int anchor, const SimParams& params) {
    if (!pull_allowable(state, mover, anchor, params)) infeasible("pull_allowable", mover, anchor);
    const Stack& sm = require(state, mover);
    const Stack& sa = require(state, anchor);
    const Point2 end = pull_contact_point(sm, sa, params.dishes);
    const Point2 dir = sa.base - sm.base;
    // Cups and bowls are dragged from inside by their inner wall; utensils
    // are caged at their center. Either way the gripper faces the motion.
    PullAction p;
    p.mover = mover;
    p.anchor = anchor;
    p.start = sm.base;
    p.end = end;
    p.z_start = p.z_end = sm.bottom().kind == DishKind::Utensil ? params.dishes.utensil.grasp_height : 0.0;
    p.theta_start = p.theta_end = geom::normalize_half_turn(std::atan2(dir.y, dir.x));
    return p;
}

bool stack_allowable(const SceneState& state, int lifted, int base, const SimParams& params) {
    if (lifted == base) return false;
    const Stack* sl = state.find(lifted);
    const Stack* sb = state.find(base);
    if (sl == nullptr || sb == nullptr) return false;
    const DishSpecs& specs = params.dishes;
    if (specs.of(sl->bottom().kind).effective_radius() > specs.of(sb->top().kind).effective_radius()) return false;
    if (stack_rise(*sl, specs) > params.gripper.jaw_height) return false;
    Stack merged = *sb;
    merged.dishes.insert(merged.dishes.end(), sl->dishes.begin(), sl->dishes.end());
    return stack_rise(merged, specs) <= params.gripper.jaw_height;
}

StackAction plan_stack(const SceneState& state, int lifted, int base, Rng& rng, const SimParams& params) {
    if (!stack_allowable(state, lifted, base, params)) infeasible("stack_allowable", lifted, base);
    const Stack& sb = require(state, base);
    StackAction s;
    s.lift = grasp_points(state, lifted, rng, params.dishes);
    s.place = sb.base;
    s.z_place = stack_top_lip_height(sb, params.dishes);
    s.theta_place = s.lift.theta;
    s.lifted = lifted;
    s.base = base;
    return s;
}

SceneState after_pull(const SceneState& state, const PullAction& pull) {
    SceneState next = state;
    if (Stack* s = next.find(pull.mover)) s->base = pull.end;
    return next;
}

SceneState after_stack(const SceneState& state, int lifted, int base) {
    SceneState next = state;
    auto it = std::find_if(next.stacks.begin(), next.stacks.end(), [&](const Stack& s) { return s.id() == lifted; });
    const Stack moving = *it;
    next.stacks.erase(it);
    Stack* b = next.find(base);
    b->dishes.insert(b->dishes.end(), moving.dishes.begin(), moving.dishes.end());
    return next;
}

Transition apply(const SceneState& state, const Action& action, const SimParams& params, Outcome outcome,
                 std::size_t index) {
    const bool ok = outcome == Outcome::Success;
    Transition tr{state, TraceEvent{index, action, {}, false, !ok}};
    SceneState& st = tr.state;
    TraceEvent& ev = tr.event;

    if (const auto* g = std::get_if<GraspAction>(&action)) {
        if (g->targets.empty() || g->targets.size() > 2) {
            throw Error(ErrorCode::InfeasibleAction, "infeasible action: grasp needs one or two targets");
        }
        for (int id : g->targets) require(state, id);
        if (g->targets.size() == 2) {
            if (!mog_allowable(state, g->targets[0], g->targets[1], params)) {
                infeasible("mog_allowable", g->targets[0], g->targets[1]);
            }
            bin_stack(st, g->targets[0], ev.moved_to_bin);
            if (ok) bin_stack(st, g->targets[1], ev.moved_to_bin);
            ev.trip = true;
        } else if (ok) {
            bin_stack(st, g->targets[0], ev.moved_to_bin);
            ev.trip = true;
        }
    } else if (const auto* pg = std::get_if<PullGrasp>(&action)) {
        const PullAction& p = pg->pull;
        if (!pull_allowable(state, p.mover, p.anchor, params)) infeasible("pull_allowable", p.mover, p.anchor);
        st = after_pull(state, p);
        auto t = pg->grasp.targets;
        std::sort(t.begin(), t.end());
        if (t != std::vector<int>{std::min(p.mover, p.anchor), std::max(p.mover, p.anchor)} ||
            !mog_allowable(st, p.mover, p.anchor, params)) {
            infeasible("mog_allowable", p.mover, p.anchor);
        }
        bin_stack(st, p.anchor, ev.moved_to_bin);
        if (ok) bin_stack(st, p.mover, ev.moved_to_bin);
        ev.trip = true;
    } else {
        const auto& sg = std::get<StackGrasp>(action);
        if (sg.stacks.empty()) throw Error(ErrorCode::InfeasibleAction, "infeasible action: stack_grasp without stacks");
        const int base = sg.stacks.front().base;
        SceneState merged = state;
        for (const auto& s : sg.stacks) {
            if (s.base != base) throw Error(ErrorCode::InfeasibleAction, "infeasible action: stack_grasp with mixed bases");
            if (!stack_allowable(merged, s.lifted, base, params)) infeasible("stack_allowable", s.lifted, base);
            merged = after_stack(merged, s.lifted, base);
        }
        if (sg.grasp.targets != std::vector<int>{base}) infeasible("grasp_targets", base);
        if (ok) {
            st = std::move(merged);
            bin_stack(st, base, ev.moved_to_bin);
        } else {
            // Placement slipped: lifted stacks stay where they were.
            bin_stack(st, base, ev.moved_to_bin);
        }
        ev.trip = true;
    }
    if (ev.trip) ++st.trips_taken;
    return tr;
}

}  // namespace declutter
