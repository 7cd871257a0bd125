#pragma once

// Hierarchical z-order grid over a lon/lat bounding box.
//
// A cell at level L is named by a Gid holding 2*L bits: one quadrant digit
// per level, most significant pair first. The digit at each level is
// (yBit << 1) | xBit, where a set bit means "upper half" of the parent
// cell along that axis, measured from the (minLon, minLat) corner. The
// ancestor of a cell at a shallower level is therefore a right shift, and
// the leaf code is the Morton interleave of the column/row indices.

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sfw {

inline constexpr int kMaxGridHeight = 31;

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
};

struct BoundingBox {
  double min_lon = -180.0;
  double min_lat = -90.0;
  double max_lon = 180.0;
  double max_lat = 90.0;

  bool contains(const GeoPoint& p) const {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat &&
           p.lat <= max_lat;
  }
  double width() const { return max_lon - min_lon; }
  double height() const { return max_lat - min_lat; }
  GeoPoint center() const {
    return {min_lon + width() / 2.0, min_lat + height() / 2.0};
  }
};

// Throws ConfigInvalid unless min < max on both axes and the box lies in
// [-180, 180] x [-90, 90].
void validate(const BoundingBox& bbox);

struct Gid {
  int level = 0;
  std::uint64_t code = 0;

  friend auto operator<=>(const Gid&, const Gid&) = default;
};

struct GidHash {
  std::size_t operator()(const Gid& g) const noexcept {
    return std::hash<std::uint64_t>{}(g.code * 64u + static_cast<std::uint64_t>(g.level));
  }
};

class GridConfig {
 public:
  GridConfig() = default;
  // Throws ConfigInvalid on a degenerate box or a height outside [0, 31].
  GridConfig(BoundingBox bbox, int height);

  const BoundingBox& bbox() const { return bbox_; }
  int height() const { return height_; }
  std::uint64_t cells_per_axis() const { return std::uint64_t{1} << height_; }

 private:
  BoundingBox bbox_{};
  int height_ = 0;
};

// Leaf-level gid of p. Points on the max edges clamp into the last cell.
// Throws PointOutOfBounds when p is outside the box.
Gid encode(const GeoPoint& p, const GridConfig& cfg);

// Throws InvalidLevel if target_level is negative or deeper than g.
Gid ancestor_at(const Gid& g, int target_level);

// The four children of g ordered by code. Throws InvalidLevel at leaf level.
std::array<Gid, 4> children_of(const Gid& g, const GridConfig& cfg);

// Geographic extent of a cell at any level.
BoundingBox cell_bounds(const Gid& g, const GridConfig& cfg);

// Quadrant digit (0..3) of g at 1-based level `level`.
unsigned quadrant_at(const Gid& g, int level);

// Larger of the box's width/height in meters, equirectangular approximation
// at the box's center latitude.
double max_extent_meters(const BoundingBox& bbox);

// Smallest h in [0, 31] whose leaf cells are no larger than target_meters
// along the larger axis.
int choose_grid_height(double extent_meters, double target_meters);
int choose_grid_height(const BoundingBox& bbox, double target_meters);

// "000110" style rendering; the root renders as the empty string.
std::string gid_to_string(const Gid& g);

// Inverse of gid_to_string. Throws MalformedGid on odd length, characters
// other than '0'/'1', or more levels than `height`.
Gid parse_gid(std::string_view text, int height);

}  // namespace sfw
