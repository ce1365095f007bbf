#include "dtvar/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "dtvar/random.hpp"

namespace dtvar {
namespace {

double bilinear(const ScalarGrid& g, Point2 p) {
  const double x = std::clamp(p.x, 0.0, static_cast<double>(g.width() - 1));
  const double y = std::clamp(p.y, 0.0, static_cast<double>(g.height() - 1));
  const int c0 = static_cast<int>(std::floor(x));
  const int r0 = static_cast<int>(std::floor(y));
  const int c1 = std::min(c0 + 1, g.width() - 1);
  const int r1 = std::min(r0 + 1, g.height() - 1);
  const double fx = x - c0;
  const double fy = y - r0;
  return (1 - fx) * (1 - fy) * g(r0, c0) + fx * (1 - fy) * g(r0, c1) + (1 - fx) * fy * g(r1, c0) +
         fx * fy * g(r1, c1);
}

struct Normalized {
  ScalarGrid field;
  double scale = 1.0;  // M, pixels per normalised unit
};

Normalized normalized_dt(const Shape& shape) {
  ScalarGrid dt = exact_edt(shape.contour);
  double peak = 0.0;
  for (std::size_t i = 0; i < dt.size(); ++i)
    if (shape.interior.values()[i]) peak = std::max(peak, dt.values()[i]);
  if (!(peak > 0.0)) throw Error(Errc::degenerate_shape, "interior has no positive distance");
  for (double& v : dt.values()) v /= peak;
  return {std::move(dt), peak};
}

// Every pixel touched by bilinear taps within half a pixel of p is interior.
bool well_inside(const BinaryMask& interior, Point2 p) {
  for (int r = static_cast<int>(std::floor(p.y - 0.5)); r <= static_cast<int>(std::ceil(p.y + 0.5)); ++r)
    for (int c = static_cast<int>(std::floor(p.x - 0.5)); c <= static_cast<int>(std::ceil(p.x + 0.5)); ++c)
      if (!interior.in_bounds(r, c) || !interior(r, c)) return false;
  return true;
}

double curvature_estimate(const BinaryMask& contour) {
  const auto [cr, cc] = centroid(contour);
  std::vector<Point2> pts;
  for (int r = 0; r < contour.height(); ++r)
    for (int c = 0; c < contour.width(); ++c)
      if (contour(r, c)) pts.push_back({static_cast<double>(c), static_cast<double>(r)});
  std::sort(pts.begin(), pts.end(), [&, cr = cr, cc = cc](Point2 a, Point2 b) {
    return std::atan2(a.y - cr, a.x - cc) < std::atan2(b.y - cr, b.x - cc);
  });
  const int n = static_cast<int>(pts.size());
  constexpr int k = 5;
  if (n < 2 * k + 1) return 0.0;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point2 p = pts[static_cast<std::size_t>((i - k + n) % n)];
    const Point2 q = pts[static_cast<std::size_t>(i)];
    const Point2 s = pts[static_cast<std::size_t>((i + k) % n)];
    const double ax = q.x - p.x, ay = q.y - p.y;
    const double bx = s.x - q.x, by = s.y - q.y;
    const double la = std::hypot(ax, ay);
    const double lb = std::hypot(bx, by);
    if (la == 0.0 || lb == 0.0) continue;
    const double turn = std::abs(std::atan2(ax * by - ay * bx, ax * bx + ay * by));
    best = std::max(best, turn / (0.5 * (la + lb)));
  }
  return best;
}

}  // namespace

double target_loss(RemapFunction g, const ScalarGrid& normalized_dt, Point2 y, Point2 u) {
  const double e = g(bilinear(normalized_dt, u)) - g(bilinear(normalized_dt, y));
  return e * e;
}

BoundEstimates estimate_bounds(RemapFunction g, const Shape& shape, Point2 y, int samples, std::uint64_t seed,
                               double eta) {
  const Normalized nd = normalized_dt(shape);
  const double m = nd.scale;
  BoundEstimates out;
  out.k1 = g.k1();
  out.k2 = g.k2();
  out.k3 = curvature_estimate(shape.contour) * m;
  out.eta = eta;
  out.alpha_bound = 4.0 * out.k1;
  out.beta_bound = 2.0 * out.alpha_bound * out.k1 + 4.0 * out.k2 + 4.0 * out.k1 * out.k3;

  int r_lo = shape.interior.height(), r_hi = -1, c_lo = shape.interior.width(), c_hi = -1;
  for (int r = 0; r < shape.interior.height(); ++r)
    for (int c = 0; c < shape.interior.width(); ++c)
      if (shape.interior(r, c)) {
        r_lo = std::min(r_lo, r);
        r_hi = std::max(r_hi, r);
        c_lo = std::min(c_lo, c);
        c_hi = std::max(c_hi, c);
      }

  Rng rng(seed);
  auto draw = [&](Point2& p) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      p = {rng.uniform(c_lo, c_hi), rng.uniform(r_lo, r_hi)};
      if (well_inside(shape.interior, p)) return true;
    }
    return false;
  };
  constexpr double h = 0.25;
  auto grad = [&](Point2 u) {
    const double sx = target_loss(g, nd.field, y, {u.x + h, u.y}) - target_loss(g, nd.field, y, {u.x - h, u.y});
    const double sy = target_loss(g, nd.field, y, {u.x, u.y + h}) - target_loss(g, nd.field, y, {u.x, u.y - h});
    return Point2{sx * m / (2 * h), sy * m / (2 * h)};
  };

  for (int i = 0; i < samples; ++i) {
    Point2 u;
    Point2 v;
    if (!draw(u)) throw Error(Errc::degenerate_shape, "interior too thin to sample");
    if (i % 2 == 0) {
      if (!draw(v)) throw Error(Errc::degenerate_shape, "interior too thin to sample");
    } else {
      bool found = false;
      for (int attempt = 0; attempt < 100 && !found; ++attempt) {
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double rad = rng.uniform(0.05, 1.5);
        v = {u.x + rad * std::cos(a), u.y + rad * std::sin(a)};
        found = well_inside(shape.interior, v);
      }
      if (!found) continue;
    }
    const double dist = std::hypot(u.x - v.x, u.y - v.y) / m;
    if (dist < 1e-9) continue;
    const double dl = std::abs(target_loss(g, nd.field, y, u) - target_loss(g, nd.field, y, v));
    out.alpha_hat = std::max(out.alpha_hat, dl / dist);
    const Point2 gu = grad(u);
    const Point2 gv = grad(v);
    out.beta_hat = std::max(out.beta_hat, std::hypot(gu.x - gv.x, gu.y - gv.y) / dist);
  }
  out.lipschitz_ok = out.alpha_hat <= out.alpha_bound * (1.0 + bound_slack);
  return out;
}

double convexity_check(RemapFunction g, const Shape& shape, Point2 y, double eta, double radius) {
  if (!(eta >= 0.0)) throw Error(Errc::invalid_argument, "eta must be >= 0");
  const Normalized nd = normalized_dt(shape);
  const double m = nd.scale;
  auto total = [&](double x, double yy) {
    const double dx = (x - y.x) / m;
    const double dy = (yy - y.y) / m;
    return target_loss(g, nd.field, y, {x, yy}) + eta * (dx * dx + dy * dy);
  };
  const double h2 = 1.0 / (m * m);
  const int reach = static_cast<int>(std::floor(radius));
  double best = std::numeric_limits<double>::infinity();
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -reach; j <= reach; ++j) {
      if (i * i + j * j > radius * radius) continue;
      const double x = y.x + j;
      const double yy = y.y + i;
      const double f0 = total(x, yy);
      const double hxx = (total(x + 1, yy) - 2 * f0 + total(x - 1, yy)) / h2;
      const double hyy = (total(x, yy + 1) - 2 * f0 + total(x, yy - 1)) / h2;
      const double hxy =
          (total(x + 1, yy + 1) - total(x + 1, yy - 1) - total(x - 1, yy + 1) + total(x - 1, yy - 1)) / (4 * h2);
      const double mid = 0.5 * (hxx + hyy);
      const double rad = std::hypot(0.5 * (hxx - hyy), hxy);
      best = std::min(best, mid - rad);
    }
  }
  return best;
}

}  // namespace dtvar
