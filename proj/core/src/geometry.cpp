#include "mcrowds/geometry.hpp"

#include <algorithm>
#include <array>

namespace mcrowds {

Vec2 clamp_length(Vec2 v, double max_len) {
  const double len = norm(v);
  if (len <= max_len || len == 0.0) return v;
  return v * (max_len / len);
}

bool point_in_polygon(const Polygon& poly, Vec2 p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_at = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

double polygon_area(const Polygon& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(poly[i], poly[(i + 1) % n]);
  return std::abs(twice) * 0.5;
}

Rect bounding_box(const Polygon& poly) {
  Rect r{poly.front(), poly.front()};
  for (const Vec2& p : poly) {
    r.min.x = std::min(r.min.x, p.x);
    r.min.y = std::min(r.min.y, p.y);
    r.max.x = std::max(r.max.x, p.x);
    r.max.y = std::max(r.max.y, p.y);
  }
  return r;
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  const int o1 = orientation(a0, a1, b0);
  const int o2 = orientation(a0, a1, b1);
  const int o3 = orientation(b0, b1, a0);
  const int o4 = orientation(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a0, a1, b0)) return true;
  if (o2 == 0 && on_segment(a0, a1, b1)) return true;
  if (o3 == 0 && on_segment(b0, b1, a0)) return true;
  if (o4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len_sq = norm_sq(ab);
  if (len_sq == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
  return distance(p, a + ab * t);
}

bool rect_overlaps_polygon(const Rect& rect, const Polygon& poly) {
  if (poly.size() < 3) return false;
  for (const Vec2& v : poly)
    if (rect.contains(v)) return true;
  const std::array<Vec2, 4> corners{rect.min, Vec2{rect.max.x, rect.min.y}, rect.max,
                                    Vec2{rect.min.x, rect.max.y}};
  for (const Vec2& c : corners)
    if (point_in_polygon(poly, c)) return true;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (segments_intersect(poly[i], poly[(i + 1) % n], corners[k], corners[(k + 1) % 4]))
        return true;
    }
  }
  return false;
}

bool circle_overlaps_polygon(Vec2 center, double radius, const Polygon& poly) {
  if (poly.size() < 3) return false;
  if (point_in_polygon(poly, center)) return true;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (point_segment_distance(center, poly[i], poly[(i + 1) % n]) <= radius) return true;
  return false;
}

}  // namespace mcrowds
