#pragma once

#include <cmath>
#include <vector>

namespace mcrowds {

/// Planar vector in meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm_sq(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm_sq(a)); }
constexpr double distance_sq(Vec2 a, Vec2 b) { return norm_sq(a - b); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Returns `v` scaled to at most `max_len`.
Vec2 clamp_length(Vec2 v, double max_len);

/// Axis-aligned rectangle, inclusive on all sides.
struct Rect {
  Vec2 min;
  Vec2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
  bool degenerate() const { return !(width() > 0.0) || !(height() > 0.0); }
  bool contains(Vec2 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool contains(const Rect& r) const { return contains(r.min) && contains(r.max); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Simple polygon, vertices in order (either winding).
using Polygon = std::vector<Vec2>;

/// Even-odd containment test.
bool point_in_polygon(const Polygon& poly, Vec2 p);

double polygon_area(const Polygon& poly);

Rect bounding_box(const Polygon& poly);

bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);

/// Shortest distance from `p` to segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

bool rect_overlaps_polygon(const Rect& rect, const Polygon& poly);
bool circle_overlaps_polygon(Vec2 center, double radius, const Polygon& poly);

}  // namespace mcrowds
