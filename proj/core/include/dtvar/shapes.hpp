#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "dtvar/grid.hpp"

namespace dtvar {

enum class ShapeKind { rectangle, star, polygon, disk };

ShapeKind parse_shape_kind(std::string_view name);
std::string_view shape_kind_name(ShapeKind kind);

struct ShapeSpec {
  ShapeKind kind = ShapeKind::disk;
  int size = 64;           // square canvas side, >= 16
  double extent = 0.875;   // shape diameter (or rectangle width) / size
  double aspect = 1.0;     // rectangle width / height
  int vertices = 5;        // star points or polygon corners
  double center_x = -1.0;  // negative: canvas centre
  double center_y = -1.0;
  std::uint64_t seed = 0;
};

struct Shape {
  BinaryMask interior;
  BinaryMask contour;  // interior pixels with a 4-neighbour outside
};

/// Deterministic rasterisation at pixel centres. Stars and polygons draw
/// their random parameters from seed; polygons are resampled until simple.
/// Throws DegenerateShape when the interior, or the interior minus its
/// contour, is empty; InvalidArgument when size < 16.
Shape gen_shape(const ShapeSpec& spec);

/// Random kind and parameters that keep the shape at least `margin` pixels
/// from the canvas border.
ShapeSpec random_shape_spec(std::uint64_t seed, int size, int margin = 8);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Even-odd test; vertices in (x = column, y = row) order.
bool point_in_polygon(const std::vector<Point2>& poly, double x, double y);

/// True when no two non-adjacent edges intersect.
bool is_simple_polygon(const std::vector<Point2>& poly);

/// Mean (row, col) of the set pixels. Throws EmptyContour on an empty mask.
std::pair<double, double> centroid(const BinaryMask& m);

/// out(r, c) = g(r - dr, c - dc); pixels shifted in from outside get fill.
template <typename T>
Grid<T> translate(const Grid<T>& g, int dr, int dc, T fill = T{}) {
  Grid<T> out(g.height(), g.width(), fill);
  for (int r = 0; r < g.height(); ++r)
    for (int c = 0; c < g.width(); ++c)
      if (g.in_bounds(r - dr, c - dc)) out(r, c) = g(r - dr, c - dc);
  return out;
}

/// Euclidean distance from each pixel centre to the interior centroid.
ScalarGrid centroid_distance(const BinaryMask& interior);

}  // namespace dtvar
