#pragma once

// Slow, obviously-correct reference computations.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "declutter/geometry2d.hpp"

namespace testing {

using declutter::geom::Disc;
using declutter::geom::Footprint;
using declutter::geom::OrientedRect;
using declutter::geom::Point2;

/// Point membership with a tolerance band around the boundary.
inline bool contains(const Footprint& f, Point2 p, double tol) {
    if (const auto* d = std::get_if<Disc>(&f)) return std::hypot(p.x - d->center.x, p.y - d->center.y) <= d->radius + tol;
    const auto& r = std::get<OrientedRect>(f);
    const double c = std::cos(r.theta), s = std::sin(r.theta);
    const double dx = p.x - r.center.x, dy = p.y - r.center.y;
    const double u = c * dx + s * dy, v = -s * dx + c * dy;
    return std::abs(u) <= r.length / 2 + tol && std::abs(v) <= r.width / 2 + tol;
}

/// Grid of points over footprint `a`'s bounding square, spacing `step`.
template <class Fn>
void sample_points(const Footprint& a, double step, Fn fn) {
    const Point2 c = declutter::geom::center_of(a);
    const double r = declutter::geom::circumscribed_radius(a);
    for (double x = c.x - r; x <= c.x + r; x += step)
        for (double y = c.y - r; y <= c.y + r; y += step) fn(Point2{x, y});
}

/// True if some sample point lies in both footprints (shrunk by `tol`).
inline bool sampled_overlap(const Footprint& a, const Footprint& b, double step = 0.02) {
    bool hit = false;
    sample_points(a, step, [&](Point2 p) { hit = hit || (contains(a, p, step) && contains(b, p, step)); });
    return hit;
}

/// Minimum distance from any sampled point of `f` to segment a-b.
/// Smallest margin by which a sampled point of `f` stays outside the
/// rectangle swept by a->b widened by `half_width` on each side (no end
/// caps). Negative means some point lies inside.
inline double sampled_corridor_margin(const Footprint& f, Point2 a, Point2 b, double half_width, double step = 0.02) {
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const double ux = len > 0 ? (b.x - a.x) / len : 1.0;
    const double uy = len > 0 ? (b.y - a.y) / len : 0.0;
    double best = 1e300;
    sample_points(f, step, [&](Point2 p) {
        if (!contains(f, p, 0.0)) return;
        const double along = (p.x - a.x) * ux + (p.y - a.y) * uy;
        const double across = std::abs(-(p.x - a.x) * uy + (p.y - a.y) * ux);
        best = std::min(best, std::max({across - half_width, -along, along - len}));
    });
    return best;
}

}  // namespace testing
