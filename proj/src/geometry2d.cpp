#include "declutter/geometry2d.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace declutter::geom {
namespace {

constexpr double kPi = std::numbers::pi;

// Rectangle with possibly zero extents; corridors degenerate to segments.
struct Box {
    Point2 center;
    Point2 axis;  // unit vector along the length
    double half_length = 0.0;
    double half_width = 0.0;

    Point2 normal() const { return {-axis.y, axis.x}; }

    std::array<Point2, 4> corners() const {
        const Point2 l = half_length * axis;
        const Point2 w = half_width * normal();
        return {center + l + w, center - l + w, center - l - w, center + l - w};
    }
};

Box to_box(const OrientedRect& r) {
    return {r.center, {std::cos(r.theta), std::sin(r.theta)}, 0.5 * r.length, 0.5 * r.width};
}

double disc_box_separation(const Disc& d, const Box& b) {
    const Point2 rel = d.center - b.center;
    const double u = std::clamp(dot(rel, b.axis), -b.half_length, b.half_length);
    const double v = std::clamp(dot(rel, b.normal()), -b.half_width, b.half_width);
    const Point2 closest = b.center + u * b.axis + v * b.normal();
    return std::max(0.0, distance(closest, d.center) - d.radius);
}

bool separated_on_axis(const std::array<Point2, 4>& pa, const std::array<Point2, 4>& pb, Point2 axis) {
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = -amin;
    for (const auto& p : pa) {
        const double s = dot(p, axis);
        amin = std::min(amin, s);
        amax = std::max(amax, s);
    }
    for (const auto& p : pb) {
        const double s = dot(p, axis);
        bmin = std::min(bmin, s);
        bmax = std::max(bmax, s);
    }
    return amax < bmin || bmax < amin;
}

double box_box_separation(const Box& a, const Box& b) {
    const auto ca = a.corners();
    const auto cb = b.corners();
    const std::array<Point2, 4> axes{a.axis, a.normal(), b.axis, b.normal()};
    const bool separated = std::any_of(axes.begin(), axes.end(),
                                       [&](Point2 ax) { return separated_on_axis(ca, cb, ax); });
    if (!separated) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            best = std::min(best, segment_segment_distance(ca[i], ca[(i + 1) % 4], cb[j], cb[(j + 1) % 4]));
        }
    }
    return best;
}

double box_separation(const Box& box, const Footprint& f) {
    if (const auto* d = std::get_if<Disc>(&f)) return disc_box_separation(*d, box);
    return box_box_separation(box, to_box(std::get<OrientedRect>(f)));
}

double orientation(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

bool on_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
    const double d1 = orientation(b0, b1, a0);
    const double d2 = orientation(b0, b1, a1);
    const double d3 = orientation(a0, a1, b0);
    const double d4 = orientation(a0, a1, b1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    return (d1 == 0 && on_segment(b0, b1, a0)) || (d2 == 0 && on_segment(b0, b1, a1)) ||
           (d3 == 0 && on_segment(a0, a1, b0)) || (d4 == 0 && on_segment(a0, a1, b1));
}

}  // namespace

double normalize_half_turn(double angle) {
    double a = std::fmod(angle, kPi);
    if (a < 0.0) a += kPi;
    // fmod of values a hair below a multiple of pi can land on pi itself
    if (a >= kPi) a = 0.0;
    return a;
}

bool is_valid(const Footprint& f) {
    if (const auto* d = std::get_if<Disc>(&f)) {
        return std::isfinite(d->center.x) && std::isfinite(d->center.y) && d->radius > 0.0;
    }
    const auto& r = std::get<OrientedRect>(f);
    return std::isfinite(r.center.x) && std::isfinite(r.center.y) && r.width > 0.0 &&
           r.length >= r.width && r.theta >= 0.0 && r.theta < kPi;
}

double separation(const Footprint& a, const Footprint& b) {
    if (const auto* da = std::get_if<Disc>(&a)) {
        if (const auto* db = std::get_if<Disc>(&b)) {
            return std::max(0.0, distance(da->center, db->center) - da->radius - db->radius);
        }
        return disc_box_separation(*da, to_box(std::get<OrientedRect>(b)));
    }
    return box_separation(to_box(std::get<OrientedRect>(a)), b);
}

bool overlaps(const Footprint& a, const Footprint& b) { return separation(a, b) <= kContactTolerance; }

bool corridor_clear(Point2 a, Point2 b, double half_width, std::span<const Footprint> obstacles) {
    const Point2 d = b - a;
    const double len = norm(d);
    Box corridor{0.5 * (a + b), len > 0.0 ? (1.0 / len) * d : Point2{1.0, 0.0}, 0.5 * len, half_width};
    return std::none_of(obstacles.begin(), obstacles.end(), [&](const Footprint& f) {
        return box_separation(corridor, f) <= kContactTolerance;
    });
}

RimPoint rim_point(Point2 center, double radius, double angle) {
    return {center + radius * Point2{std::cos(angle), std::sin(angle)}, normalize_half_turn(angle)};
}

Point2 center_of(const Footprint& f) {
    return std::visit([](const auto& s) { return s.center; }, f);
}

double circumscribed_radius(const Footprint& f) {
    if (const auto* d = std::get_if<Disc>(&f)) return d->radius;
    const auto& r = std::get<OrientedRect>(f);
    return 0.5 * std::hypot(r.length, r.width);
}

Footprint translated(const Footprint& f, Point2 delta) {
    return std::visit(
        [&](auto s) -> Footprint {
            s.center = s.center + delta;
            return s;
        },
        f);
}

Footprint moved_to(const Footprint& f, Point2 center) { return translated(f, center - center_of(f)); }

bool inside_workspace(const Footprint& f, double width, double height) {
    constexpr double slack = 1e-9;
    auto inside = [&](Point2 p) {
        return p.x >= -slack && p.y >= -slack && p.x <= width + slack && p.y <= height + slack;
    };
    if (const auto* d = std::get_if<Disc>(&f)) {
        return inside(d->center - Point2{d->radius, d->radius}) && inside(d->center + Point2{d->radius, d->radius});
    }
    const auto corners = to_box(std::get<OrientedRect>(f)).corners();
    return std::all_of(corners.begin(), corners.end(), inside);
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
    if (segments_intersect(a0, a1, b0, b1)) return 0.0;
    return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                     point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

std::pair<Point2, Point2> axis_segment(const OrientedRect& r) {
    const Point2 half = (0.5 * r.length) * Point2{std::cos(r.theta), std::sin(r.theta)};
    return {r.center - half, r.center + half};
}

}  // namespace declutter::geom
