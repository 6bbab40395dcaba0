#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mcrowds/geometry.hpp"

namespace mcrowds {

struct Marker {
  int id = 0;
  Vec2 position;

  friend bool operator==(const Marker&, const Marker&) = default;
};

/// Raised when the requested region has no free space to place markers in.
class EmptyFieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform grid over a bounding rectangle; each cell lists the ids of the
/// markers whose position falls in it. Points on or past the far edge are
/// clamped into the last row/column, so every marker lands in exactly one cell.
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(const Rect& bounds, double cell_size, std::span<const Marker> markers);

  double cell_size() const { return cell_size_; }
  int columns() const { return columns_; }
  int rows() const { return rows_; }

  int column_of(double x) const;
  int row_of(double y) const;
  const std::vector<int>& cell(int column, int row) const {
    return cells_[static_cast<std::size_t>(row) * columns_ + column];
  }

  /// Calls `fn(marker_id)` for every marker in cells that may lie within
  /// `radius` of `p`. With radius <= cell_size this is the 3x3 neighborhood.
  template <class Fn>
  void for_each_candidate(Vec2 p, double radius, Fn&& fn) const {
    if (cells_.empty()) return;
    const int reach = radius <= cell_size_ ? 1 : static_cast<int>(radius / cell_size_) + 1;
    const int c0 = column_of(p.x), r0 = row_of(p.y);
    for (int r = r0 - reach; r <= r0 + reach; ++r) {
      if (r < 0 || r >= rows_) continue;
      for (int c = c0 - reach; c <= c0 + reach; ++c) {
        if (c < 0 || c >= columns_) continue;
        for (int id : cell(c, r)) fn(id);
      }
    }
  }

 private:
  Rect bounds_{};
  double cell_size_ = 1.0;
  int columns_ = 0;
  int rows_ = 0;
  std::vector<std::vector<int>> cells_;
};

/// Immutable marker set plus its spatial index. Marker ids equal their index
/// in `markers()`.
class MarkerField {
 public:
  MarkerField() = default;
  MarkerField(const Rect& bounds, std::vector<Marker> markers, double cell_size,
              double density = 0.0, std::uint64_t seed = 0);

  const Rect& bounds() const { return bounds_; }
  const std::vector<Marker>& markers() const { return markers_; }
  const Marker& marker(int id) const { return markers_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return markers_.size(); }
  const SpatialGrid& index() const { return index_; }
  double density() const { return density_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Rect bounds_{};
  std::vector<Marker> markers_;
  SpatialGrid index_;
  double density_ = 0.0;
  std::uint64_t seed_ = 0;
};

/// Samples round(density * bounds area) uniform points over `bounds` and keeps
/// those outside every obstacle, so the expected count is density * free area.
/// Throws std::invalid_argument on bad inputs, EmptyFieldError when nothing survives.
MarkerField generate_markers(const Rect& bounds, const std::vector<Polygon>& obstacles,
                             double density, std::uint64_t seed, double cell_size = 2.0);

}  // namespace mcrowds
