#include "dtvar/translation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dtvar/distance.hpp"
#include "dtvar/random.hpp"

namespace dtvar {
namespace {

struct Box {
  int r0, r1, c0, c1;  // inclusive
};

// Rows/cols where W or B can be nonzero, padded by two pixels.
Box active_box(const ScalarGrid& a, const ScalarGrid& b, Point2 shift) {
  Box box{a.height(), -1, a.width(), -1};
  auto grow = [&](const ScalarGrid& g, double dy, double dx) {
    for (int r = 0; r < g.height(); ++r) {
      for (int c = 0; c < g.width(); ++c) {
        if (g(r, c) == 0.0) continue;
        box.r0 = std::min(box.r0, static_cast<int>(std::floor(r + dy)) - 2);
        box.r1 = std::max(box.r1, static_cast<int>(std::ceil(r + dy)) + 2);
        box.c0 = std::min(box.c0, static_cast<int>(std::floor(c + dx)) - 2);
        box.c1 = std::max(box.c1, static_cast<int>(std::ceil(c + dx)) + 2);
      }
    }
  };
  grow(a, shift.y, shift.x);
  grow(b, 0.0, 0.0);
  box.r0 = std::max(box.r0, 0);
  box.c0 = std::max(box.c0, 0);
  box.r1 = std::min(box.r1, a.height() - 1);
  box.c1 = std::min(box.c1, a.width() - 1);
  return box;
}

struct Tap {
  double value, dx, dy;  // W and dW/d(shift)
};

Tap warp_at(const ScalarGrid& a, int r, int c, Point2 shift) {
  const double x = c - shift.x;
  const double y = r - shift.y;
  const double xf = std::floor(x);
  const double yf = std::floor(y);
  const int x0 = static_cast<int>(xf);
  const int y0 = static_cast<int>(yf);
  const double fx = x - xf;
  const double fy = y - yf;
  auto at = [&](int rr, int cc) { return a.in_bounds(rr, cc) ? a(rr, cc) : 0.0; };
  const double p = at(y0, x0);
  const double q = at(y0, x0 + 1);
  const double s = at(y0 + 1, x0);
  const double t = at(y0 + 1, x0 + 1);
  const double value = (1 - fx) * (1 - fy) * p + fx * (1 - fy) * q + (1 - fx) * fy * s + fx * fy * t;
  const double dwdx = (1 - fy) * (q - p) + fy * (t - s);
  const double dwdy = (1 - fx) * (s - p) + fx * (t - q);
  return {value, -dwdx, -dwdy};
}

double loss_on_box(const ScalarGrid& a, const ScalarGrid& b, Point2 shift, const Box& box, Point2* grad,
                   VectorField* map) {
  const double n = static_cast<double>(a.size());
  double total = 0.0;
  double gx = 0.0;
  double gy = 0.0;
  for (int r = box.r0; r <= box.r1; ++r) {
    for (int c = box.c0; c <= box.c1; ++c) {
      const Tap tap = warp_at(a, r, c, shift);
      const double res = tap.value - b(r, c);
      total += res * res;
      const double cx = 2.0 * res * tap.dx / n;
      const double cy = 2.0 * res * tap.dy / n;
      gx += cx;
      gy += cy;
      if (map) {
        auto v = map->at(r, c);
        v[0] = cx;
        v[1] = cy;
      }
    }
  }
  if (grad) *grad = {gx, gy};
  return total / n;
}

}  // namespace

Fill parse_fill(std::string_view name) {
  if (name == "uniform") return Fill::uniform;
  if (name == "dt") return Fill::dt;
  throw Error(Errc::invalid_argument, "unknown fill '" + std::string(name) + "'");
}

ScalarGrid filled_shape(const Shape& shape, Fill fill) {
  const ScalarGrid dt = fill == Fill::dt ? exact_edt(shape.contour) : ScalarGrid(1, 1);
  ScalarGrid out(shape.interior.height(), shape.interior.width(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (shape.interior.values()[i]) out.values()[i] = fill == Fill::dt ? dt.values()[i] : 1.0;
  }
  return out;
}

ScalarGrid shift_bilinear(const ScalarGrid& a, Point2 shift) {
  ScalarGrid out(a.height(), a.width());
  for (int r = 0; r < a.height(); ++r)
    for (int c = 0; c < a.width(); ++c) out(r, c) = warp_at(a, r, c, shift).value;
  return out;
}

double shift_loss(const ScalarGrid& a, const ScalarGrid& b, Point2 shift, Point2* grad) {
  require_same_shape(a, b, "shift_loss: grids differ in size");
  const Box full{0, a.height() - 1, 0, a.width() - 1};
  return loss_on_box(a, b, shift, full, grad, nullptr);
}

VectorField shift_gradient_map(const ScalarGrid& a, const ScalarGrid& b, Point2 shift) {
  require_same_shape(a, b, "shift_gradient_map: grids differ in size");
  VectorField map(a.height(), a.width(), 2, 0.0);
  const Box full{0, a.height() - 1, 0, a.width() - 1};
  loss_on_box(a, b, shift, full, nullptr, &map);
  return map;
}

TranslationRecord translation_recovery(const Shape& shape, Fill fill, const TranslationConfig& config) {
  const ScalarGrid a = filled_shape(shape, fill);
  const ScalarGrid b = shift_bilinear(a, config.true_shift);
  TranslationRecord rec;
  Point2 est = config.initial_shift;
  for (int it = 0;; ++it) {
    const double err = std::hypot(est.x - config.true_shift.x, est.y - config.true_shift.y);
    rec.error.push_back(err);
    if (err < config.tol || it >= config.max_iters) {
      rec.iterations = it;
      rec.converged = err < config.tol;
      break;
    }
    Point2 g;
    rec.loss.push_back(loss_on_box(a, b, est, active_box(a, b, est), &g, nullptr));
    est.x -= config.lr * g.x;
    est.y -= config.lr * g.y;
  }
  rec.estimate = est;
  return rec;
}

std::vector<TranslationTrial> translation_trials(int trials, std::uint64_t seed, int canvas,
                                                 const TranslationConfig& base) {
  Rng rng(seed);
  std::vector<TranslationTrial> out;
  constexpr int margin = 12;
  for (int t = 0; t < trials; ++t) {
    const int h = rng.range(canvas / 6, canvas / 2 - 1);
    const int w = rng.range(canvas / 6, canvas / 2 - 1);
    const int top = rng.range(margin, canvas - h - margin - 1);
    const int left = rng.range(margin, canvas - w - margin - 1);
    TranslationTrial trial;
    trial.spec.kind = ShapeKind::rectangle;
    trial.spec.size = canvas;
    trial.spec.extent = static_cast<double>(w) / canvas;
    trial.spec.aspect = static_cast<double>(w) / h;
    trial.spec.center_x = left + (w - 1) / 2.0;
    trial.spec.center_y = top + (h - 1) / 2.0;
    trial.true_shift = {static_cast<double>(rng.range(-5, 5)), static_cast<double>(rng.range(-5, 5))};
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    trial.initial_shift = {trial.true_shift.x + 5.0 * std::cos(angle), trial.true_shift.y + 5.0 * std::sin(angle)};

    const Shape shape = gen_shape(trial.spec);
    TranslationConfig cfg = base;
    cfg.true_shift = trial.true_shift;
    cfg.initial_shift = trial.initial_shift;
    trial.uniform_iterations = translation_recovery(shape, Fill::uniform, cfg).iterations;
    trial.dt_iterations = translation_recovery(shape, Fill::dt, cfg).iterations;
    out.push_back(trial);
  }
  return out;
}

}  // namespace dtvar
