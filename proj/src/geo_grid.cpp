#include "sfw/geo_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfw/error.hpp"

namespace sfw {
namespace {

constexpr double kEarthRadiusMeters = 6371008.8;

// Spreads the low 32 bits of v so bit k lands at bit 2k.
std::uint64_t spread_bits(std::uint64_t v) {
  v &= 0x00000000FFFFFFFFULL;
  v = (v | (v << 16)) & 0x0000FFFF0000FFFFULL;
  v = (v | (v << 8)) & 0x00FF00FF00FF00FFULL;
  v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0FULL;
  v = (v | (v << 2)) & 0x3333333333333333ULL;
  v = (v | (v << 1)) & 0x5555555555555555ULL;
  return v;
}

std::uint64_t compact_bits(std::uint64_t v) {
  v &= 0x5555555555555555ULL;
  v = (v | (v >> 1)) & 0x3333333333333333ULL;
  v = (v | (v >> 2)) & 0x0F0F0F0F0F0F0F0FULL;
  v = (v | (v >> 4)) & 0x00FF00FF00FF00FFULL;
  v = (v | (v >> 8)) & 0x0000FFFF0000FFFFULL;
  v = (v | (v >> 16)) & 0x00000000FFFFFFFFULL;
  return v;
}

std::uint64_t axis_index(double value, double min, double extent,
                         std::uint64_t cells) {
  const double scaled = (value - min) / extent * static_cast<double>(cells);
  if (scaled <= 0.0) return 0;
  const auto idx = static_cast<std::uint64_t>(std::floor(scaled));
  return std::min(idx, cells - 1);
}

}  // namespace

void validate(const BoundingBox& b) {
  if (!(b.min_lon < b.max_lon) || !(b.min_lat < b.max_lat)) {
    throw ConfigInvalid("bounding box must satisfy min < max on both axes");
  }
  if (b.min_lon < -180.0 || b.max_lon > 180.0 || b.min_lat < -90.0 ||
      b.max_lat > 90.0) {
    throw ConfigInvalid("bounding box exceeds [-180,180] x [-90,90]");
  }
}

GridConfig::GridConfig(BoundingBox bbox, int height)
    : bbox_(bbox), height_(height) {
  validate(bbox_);
  if (height < 0 || height > kMaxGridHeight) {
    throw ConfigInvalid("grid height must be in [0, 31], got " +
                        std::to_string(height));
  }
}

Gid encode(const GeoPoint& p, const GridConfig& cfg) {
  const BoundingBox& b = cfg.bbox();
  if (!b.contains(p)) {
    throw PointOutOfBounds("point (" + std::to_string(p.lon) + ", " +
                           std::to_string(p.lat) + ") outside bounding box");
  }
  const std::uint64_t cells = cfg.cells_per_axis();
  const std::uint64_t x = axis_index(p.lon, b.min_lon, b.width(), cells);
  const std::uint64_t y = axis_index(p.lat, b.min_lat, b.height(), cells);
  return {cfg.height(), spread_bits(x) | (spread_bits(y) << 1)};
}

Gid ancestor_at(const Gid& g, int target_level) {
  if (target_level < 0 || target_level > g.level) {
    throw InvalidLevel("cannot take level " + std::to_string(target_level) +
                       " ancestor of a level " + std::to_string(g.level) +
                       " gid");
  }
  const int shift = 2 * (g.level - target_level);
  return {target_level, shift == 0 ? g.code : g.code >> shift};
}

std::array<Gid, 4> children_of(const Gid& g, const GridConfig& cfg) {
  if (g.level >= cfg.height()) {
    throw InvalidLevel("leaf gid has no children");
  }
  std::array<Gid, 4> out;
  for (std::uint64_t q = 0; q < 4; ++q) {
    out[q] = {g.level + 1, (g.code << 2) | q};
  }
  return out;
}

BoundingBox cell_bounds(const Gid& g, const GridConfig& cfg) {
  const BoundingBox& b = cfg.bbox();
  const double cells = std::ldexp(1.0, g.level);
  const double x = static_cast<double>(compact_bits(g.code));
  const double y = static_cast<double>(compact_bits(g.code >> 1));
  const double w = b.width() / cells;
  const double h = b.height() / cells;
  return {b.min_lon + x * w, b.min_lat + y * h, b.min_lon + (x + 1) * w,
          b.min_lat + (y + 1) * h};
}

unsigned quadrant_at(const Gid& g, int level) {
  if (level < 1 || level > g.level) {
    throw InvalidLevel("quadrant level out of range");
  }
  return static_cast<unsigned>((g.code >> (2 * (g.level - level))) & 0x3u);
}

double max_extent_meters(const BoundingBox& bbox) {
  constexpr double meters_per_degree =
      std::numbers::pi * kEarthRadiusMeters / 180.0;
  const double center_lat = bbox.center().lat * std::numbers::pi / 180.0;
  const double w = bbox.width() * meters_per_degree * std::cos(center_lat);
  const double h = bbox.height() * meters_per_degree;
  return std::max(w, h);
}

int choose_grid_height(double extent_meters, double target_meters) {
  if (!(target_meters > 0.0)) {
    throw ConfigInvalid("target cell size must be positive");
  }
  // Halving is exact in binary floating point, so powers of two land on the
  // boundary without log2 rounding error.
  int h = 0;
  double cell = extent_meters;
  while (cell > target_meters && h < kMaxGridHeight) {
    cell /= 2.0;
    ++h;
  }
  return h;
}

int choose_grid_height(const BoundingBox& bbox, double target_meters) {
  return choose_grid_height(max_extent_meters(bbox), target_meters);
}

std::string gid_to_string(const Gid& g) {
  std::string out(static_cast<std::size_t>(2 * g.level), '0');
  for (int i = 0; i < 2 * g.level; ++i) {
    if ((g.code >> (2 * g.level - 1 - i)) & 1u) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

Gid parse_gid(std::string_view text, int height) {
  if (text.size() % 2 != 0) {
    throw MalformedGid("gid string has odd length: \"" + std::string(text) + "\"");
  }
  const auto level = static_cast<int>(text.size() / 2);
  if (level > height) {
    throw MalformedGid("gid \"" + std::string(text) + "\" deeper than grid height " +
                       std::to_string(height));
  }
  std::uint64_t code = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw MalformedGid("gid string contains '" + std::string(1, c) + "'");
    }
    code = (code << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return {level, code};
}

}  // namespace sfw
