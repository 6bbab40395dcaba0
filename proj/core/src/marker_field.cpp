#include "mcrowds/marker_field.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mcrowds/random.hpp"

namespace mcrowds {

SpatialGrid::SpatialGrid(const Rect& bounds, double cell_size, std::span<const Marker> markers)
    : bounds_(bounds), cell_size_(cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("grid cell size must be positive");
  columns_ = std::max(1, static_cast<int>(std::ceil(bounds.width() / cell_size)));
  rows_ = std::max(1, static_cast<int>(std::ceil(bounds.height() / cell_size)));
  cells_.resize(static_cast<std::size_t>(columns_) * rows_);
  for (const Marker& m : markers) {
    cells_[static_cast<std::size_t>(row_of(m.position.y)) * columns_ + column_of(m.position.x)]
        .push_back(m.id);
  }
}

int SpatialGrid::column_of(double x) const {
  const int c = static_cast<int>(std::floor((x - bounds_.min.x) / cell_size_));
  return std::clamp(c, 0, columns_ - 1);
}

int SpatialGrid::row_of(double y) const {
  const int r = static_cast<int>(std::floor((y - bounds_.min.y) / cell_size_));
  return std::clamp(r, 0, rows_ - 1);
}

MarkerField::MarkerField(const Rect& bounds, std::vector<Marker> markers, double cell_size,
                         double density, std::uint64_t seed)
    : bounds_(bounds),
      markers_(std::move(markers)),
      index_(bounds, cell_size, markers_),
      density_(density),
      seed_(seed) {
  for (std::size_t i = 0; i < markers_.size(); ++i) {
    if (markers_[i].id != static_cast<int>(i))
      throw std::invalid_argument("marker ids must equal their index");
  }
}

MarkerField generate_markers(const Rect& bounds, const std::vector<Polygon>& obstacles,
                             double density, std::uint64_t seed, double cell_size) {
  if (!(density > 0.0)) throw std::invalid_argument("marker density must be positive");
  if (bounds.degenerate()) throw std::invalid_argument("marker bounds are degenerate");

  const auto samples = static_cast<std::size_t>(std::llround(density * bounds.area()));
  std::mt19937_64 gen(derive_seed(seed, streams::kMarkers));
  std::vector<Marker> markers;
  markers.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec2 p{uniform(gen, bounds.min.x, bounds.max.x), uniform(gen, bounds.min.y, bounds.max.y)};
    const bool blocked = std::any_of(obstacles.begin(), obstacles.end(),
                                     [&](const Polygon& o) { return point_in_polygon(o, p); });
    if (!blocked) markers.push_back({static_cast<int>(markers.size()), p});
  }
  if (markers.empty()) throw EmptyFieldError("no free space for markers inside the world bounds");
  return MarkerField(bounds, std::move(markers), cell_size, density, seed);
}

}  // namespace mcrowds
