#pragma once

// Planar primitives for tabletop scenes. All lengths are centimeters,
// all angles radians.

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <variant>

namespace declutter::geom {

/// Closed regions closer than this are treated as touching, and touching
/// counts as overlapping.
inline constexpr double kContactTolerance = 1e-6;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend constexpr bool operator==(Point2, Point2) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

struct Disc {
    Point2 center;
    double radius = 0.0;
};

/// Rectangle of `length` along direction `theta` and `width` across it.
struct OrientedRect {
    Point2 center;
    double length = 0.0;
    double width = 0.0;
    double theta = 0.0;
};

using Footprint = std::variant<Disc, OrientedRect>;

/// Maps any angle onto [0, pi). Used for gripper and utensil orientations,
/// which are symmetric under a half turn.
double normalize_half_turn(double angle);

bool is_valid(const Footprint& f);

/// Euclidean gap between two closed regions; 0 when they intersect.
double separation(const Footprint& a, const Footprint& b);

/// True iff the closed regions intersect (within kContactTolerance).
bool overlaps(const Footprint& a, const Footprint& b);

/// True iff no obstacle touches the rectangle swept by segment a->b and
/// inflated laterally by half_width.
bool corridor_clear(Point2 a, Point2 b, double half_width, std::span<const Footprint> obstacles);

struct RimPoint {
    Point2 point;
    double gripper_theta = 0.0;  ///< radial direction, in [0, pi)
};

/// Point on a circle at `angle` with the gripper closing across the rim,
/// i.e. perpendicular to the tangent there.
RimPoint rim_point(Point2 center, double radius, double angle);

Point2 center_of(const Footprint& f);
double circumscribed_radius(const Footprint& f);
Footprint translated(const Footprint& f, Point2 delta);
Footprint moved_to(const Footprint& f, Point2 center);

/// True iff the footprint lies fully inside [0, width] x [0, height].
bool inside_workspace(const Footprint& f, double width, double height);

/// Distance from p to the segment a-b.
double point_segment_distance(Point2 p, Point2 a, Point2 b);
double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1);

/// Endpoints of a rectangle's long axis.
std::pair<Point2, Point2> axis_segment(const OrientedRect& r);

}  // namespace declutter::geom
