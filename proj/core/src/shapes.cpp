#include "dtvar/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dtvar/random.hpp"

namespace dtvar {
namespace {

constexpr double kPi = std::numbers::pi;

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

bool on_segment(Point2 p, Point2 q, Point2 r) {
  return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
         q.y <= std::max(p.y, r.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 p3, Point2 p4) {
  const double d1 = cross(p3, p4, p1);
  const double d2 = cross(p3, p4, p2);
  const double d3 = cross(p1, p2, p3);
  const double d4 = cross(p1, p2, p4);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  return (d1 == 0 && on_segment(p3, p1, p4)) || (d2 == 0 && on_segment(p3, p2, p4)) ||
         (d3 == 0 && on_segment(p1, p3, p2)) || (d4 == 0 && on_segment(p1, p4, p2));
}

double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(a);
}

BinaryMask rasterize(const std::vector<Point2>& poly, int size) {
  BinaryMask m(size, size, 0);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) m(r, c) = point_in_polygon(poly, c, r) ? 1 : 0;
  return m;
}

std::vector<Point2> star_polygon(const ShapeSpec& spec, double cx, double cy, double radius) {
  Rng rng(spec.seed);
  const int n = std::max(spec.vertices, 3);
  const double inner = rng.uniform(0.4, 0.6);
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  std::vector<Point2> poly;
  for (int i = 0; i < 2 * n; ++i) {
    const double a = phase + kPi * i / n;
    const double rad = (i % 2 == 0 ? 1.0 : inner) * radius;
    poly.push_back({cx + rad * std::cos(a), cy + rad * std::sin(a)});
  }
  return poly;
}

std::vector<Point2> random_polygon(const ShapeSpec& spec, double cx, double cy, double radius) {
  Rng rng(spec.seed);
  const int n = std::max(spec.vertices, 3);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
      const double a = rng.uniform(0.0, 2.0 * kPi);
      const double rad = radius * std::sqrt(rng.uniform(0.16, 1.0));
      pts.push_back({cx + rad * std::cos(a), cy + rad * std::sin(a)});
    }
    double mx = 0.0;
    double my = 0.0;
    for (auto p : pts) {
      mx += p.x / n;
      my += p.y / n;
    }
    std::sort(pts.begin(), pts.end(), [&](Point2 a, Point2 b) {
      return std::atan2(a.y - my, a.x - mx) < std::atan2(b.y - my, b.x - mx);
    });
    if (is_simple_polygon(pts) && polygon_area(pts) >= 0.15 * radius * radius) return pts;
  }
  throw Error(Errc::degenerate_shape, "could not sample a simple polygon");
}

}  // namespace

ShapeKind parse_shape_kind(std::string_view name) {
  if (name == "rectangle") return ShapeKind::rectangle;
  if (name == "star") return ShapeKind::star;
  if (name == "polygon") return ShapeKind::polygon;
  if (name == "disk") return ShapeKind::disk;
  throw Error(Errc::invalid_argument, "unknown shape '" + std::string(name) + "'");
}

std::string_view shape_kind_name(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::rectangle: return "rectangle";
    case ShapeKind::star: return "star";
    case ShapeKind::polygon: return "polygon";
    case ShapeKind::disk: return "disk";
  }
  return "disk";
}

bool point_in_polygon(const std::vector<Point2>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i];
    const Point2 b = poly[j];
    if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

bool is_simple_polygon(const std::vector<Point2>& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

Shape gen_shape(const ShapeSpec& spec) {
  if (spec.size < 16) throw Error(Errc::invalid_argument, "shape canvas must be at least 16 pixels");
  if (!(spec.extent > 0.0) || !(spec.aspect > 0.0)) {
    throw Error(Errc::invalid_argument, "shape extent and aspect must be positive");
  }
  const int n = spec.size;
  const double cx = spec.center_x < 0.0 ? (n - 1) / 2.0 : spec.center_x;
  const double cy = spec.center_y < 0.0 ? (n - 1) / 2.0 : spec.center_y;
  const double radius = spec.extent * n / 2.0;

  BinaryMask interior(n, n, 0);
  switch (spec.kind) {
    case ShapeKind::rectangle: {
      const int w = std::max(1, static_cast<int>(std::lround(spec.extent * n)));
      const int h = std::max(1, static_cast<int>(std::lround(w / spec.aspect)));
      const int top = static_cast<int>(std::lround(cy - (h - 1) / 2.0));
      const int left = static_cast<int>(std::lround(cx - (w - 1) / 2.0));
      for (int r = std::max(top, 0); r < std::min(top + h, n); ++r)
        for (int c = std::max(left, 0); c < std::min(left + w, n); ++c) interior(r, c) = 1;
      break;
    }
    case ShapeKind::disk:
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          interior(r, c) = (r - cy) * (r - cy) + (c - cx) * (c - cx) <= radius * radius ? 1 : 0;
      break;
    case ShapeKind::star:
      interior = rasterize(star_polygon(spec, cx, cy, radius), n);
      break;
    case ShapeKind::polygon:
      interior = rasterize(random_polygon(spec, cx, cy, radius), n);
      break;
  }

  BinaryMask contour(n, n, 0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (!interior(r, c)) continue;
      const bool edge = r == 0 || c == 0 || r == n - 1 || c == n - 1 || !interior(r - 1, c) ||
                        !interior(r + 1, c) || !interior(r, c - 1) || !interior(r, c + 1);
      contour(r, c) = edge ? 1 : 0;
    }
  }
  if (count_set(interior) == 0 || count_set(interior) == count_set(contour)) {
    throw Error(Errc::degenerate_shape, "shape has no interior beyond its contour");
  }
  return {std::move(interior), std::move(contour)};
}

ShapeSpec random_shape_spec(std::uint64_t seed, int size, int margin) {
  Rng rng(seed);
  ShapeSpec s;
  s.size = size;
  s.seed = rng.next_u64();
  s.kind = static_cast<ShapeKind>(rng.below(4));
  s.vertices = rng.range(3, 8);
  s.aspect = rng.uniform(0.6, 1.6);
  s.extent = rng.uniform(0.25, 0.55);
  // Bounding half-size of the shape, then a random centre keeping the margin.
  double half = s.extent * size / 2.0;
  if (s.kind == ShapeKind::rectangle) half = std::max(half, half / s.aspect);
  const double lo = margin + half;
  const double hi = size - 1 - margin - half;
  s.center_x = lo < hi ? rng.uniform(lo, hi) : (size - 1) / 2.0;
  s.center_y = lo < hi ? rng.uniform(lo, hi) : (size - 1) / 2.0;
  return s;
}

std::pair<double, double> centroid(const BinaryMask& m) {
  double sr = 0.0;
  double sc = 0.0;
  std::size_t n = 0;
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c)
      if (m(r, c)) {
        sr += r;
        sc += c;
        ++n;
      }
  if (n == 0) throw Error(Errc::empty_contour, "centroid of an empty mask");
  return {sr / n, sc / n};
}

ScalarGrid centroid_distance(const BinaryMask& interior) {
  const auto [cr, cc] = centroid(interior);
  ScalarGrid out(interior.height(), interior.width());
  for (int r = 0; r < out.height(); ++r)
    for (int c = 0; c < out.width(); ++c) out(r, c) = std::hypot(r - cr, c - cc);
  return out;
}

}  // namespace dtvar
