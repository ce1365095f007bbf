#include "dtvar/variance.hpp"

#include <algorithm>
#include <cmath>

namespace dtvar {
namespace {

constexpr double kPresetVarEps = 1e-6;
constexpr double kPresetLaplacian = 0.1;
constexpr double kPresetControl = 0.01;

BinaryMask free_pixels(const BinaryMask& interior, const BinaryMask& contour) {
  require_same_shape(interior, contour, "interior and contour differ in size");
  BinaryMask free(interior.height(), interior.width(), 0);
  for (std::size_t i = 0; i < free.size(); ++i) free.values()[i] = interior.values()[i] && !contour.values()[i];
  return free;
}

struct Slope {
  double a, b, s;
};

Slope upwind(const ScalarGrid& f, int r, int c) {
  const int h = f.height();
  const int w = f.width();
  const double v = f(r, c);
  const double left = f(r, std::max(c - 1, 0));
  const double right = f(r, std::min(c + 1, w - 1));
  const double up = f(std::max(r - 1, 0), c);
  const double down = f(std::min(r + 1, h - 1), c);
  const double a = std::max(v - std::min(left, right), 0.0);
  const double b = std::max(v - std::min(up, down), 0.0);
  return {a, b, std::sqrt(a * a + b * b)};
}

double interior_mean(const ScalarGrid& f, const BinaryMask& interior, std::size_t& n) {
  double sum = 0.0;
  n = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (interior.values()[i]) {
      sum += f.values()[i];
      ++n;
    }
  }
  return n ? sum / n : 0.0;
}

}  // namespace

double eikonal_penalty(const ScalarGrid& f, const BinaryMask& interior, const BinaryMask& contour) {
  const BinaryMask free = free_pixels(interior, contour);
  double total = 0.0;
  std::size_t n = 0;
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      if (!free(r, c)) continue;
      const double e = upwind(f, r, c).s - 1.0;
      total += e * e;
      ++n;
    }
  }
  return n ? total / n : 0.0;
}

VarianceResult maximize_variance(const BinaryMask& interior, const BinaryMask& contour,
                                 const VarianceConfig& config) {
  const BinaryMask free = free_pixels(interior, contour);
  if (count_set(free) == 0) throw Error(Errc::degenerate_shape, "no free interior pixels");
  const int h = interior.height();
  const int w = interior.width();
  ScalarGrid f(h, w, 0.0);
  ScalarGrid grad(h, w, 0.0);

  for (int it = 0; it < config.iters; ++it) {
    if (config.checkpoint_every > 0 && config.on_checkpoint && it % config.checkpoint_every == 0) {
      config.on_checkpoint(it, f);
    }
    std::size_t n = 0;
    const double mean = interior_mean(f, interior, n);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (!free(r, c)) continue;
        const Slope sl = upwind(f, r, c);
        const double ds = sl.s > 0.0 ? (sl.a + sl.b) / sl.s : 1.0;
        grad(r, c) = 2.0 * config.mu * (sl.s - 1.0) * ds - 2.0 * (f(r, c) - mean) / static_cast<double>(n);
      }
    }
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        if (free(r, c)) f(r, c) -= config.lr * grad(r, c);
  }
  if (config.checkpoint_every > 0 && config.on_checkpoint) config.on_checkpoint(config.iters, f);

  VarianceResult out;
  out.eikonal_penalty = eikonal_penalty(f, interior, contour);
  out.converged = out.eikonal_penalty <= config.tolerance;
  out.field = std::move(f);
  return out;
}

double relative_rmse(const ScalarGrid& f, const ScalarGrid& ref, const BinaryMask& interior) {
  require_same_shape(f, ref, "fields differ in size");
  require_same_shape(f, interior, "field and interior differ in size");
  double fmax = 0.0;
  double rmax = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!interior.values()[i]) continue;
    fmax = std::max(fmax, f.values()[i]);
    rmax = std::max(rmax, ref.values()[i]);
  }
  if (fmax <= 0.0) fmax = 1.0;
  if (rmax <= 0.0) rmax = 1.0;
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!interior.values()[i]) continue;
    const double d = f.values()[i] / fmax - ref.values()[i] / rmax;
    total += d * d;
    ++n;
  }
  return n ? std::sqrt(total / n) : 0.0;
}

double correlation(const ScalarGrid& f, const ScalarGrid& ref, const BinaryMask& interior) {
  require_same_shape(f, ref, "fields differ in size");
  require_same_shape(f, interior, "field and interior differ in size");
  std::size_t n = 0;
  const double mf = interior_mean(f, interior, n);
  const double mr = interior_mean(ref, interior, n);
  double sff = 0.0;
  double srr = 0.0;
  double sfr = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!interior.values()[i]) continue;
    const double a = f.values()[i] - mf;
    const double b = ref.values()[i] - mr;
    sff += a * a;
    srr += b * b;
    sfr += a * b;
  }
  if (sff <= 0.0 || srr <= 0.0) return 0.0;
  return sfr / std::sqrt(sff * srr);
}

double variance_preset_loss(const ScalarGrid& f, const BinaryMask& interior) {
  require_same_shape(f, interior, "field and interior differ in size");
  std::size_t n = 0;
  const double mean = interior_mean(f, interior, n);
  if (n == 0) throw Error(Errc::degenerate_shape, "empty interior");
  double var = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!interior.values()[i]) continue;
    var += (f.values()[i] - mean) * (f.values()[i] - mean);
    l1 += std::abs(f.values()[i]);
  }
  var /= static_cast<double>(n);
  const ScalarGrid lap = laplacian(f);
  double lap_l1 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (interior.values()[i]) lap_l1 += std::abs(lap.values()[i]);
  return mean / (var + kPresetVarEps) + kPresetLaplacian * lap_l1 + kPresetControl * l1;
}

ScalarGrid variance_preset_grad(const ScalarGrid& f, const BinaryMask& interior) {
  require_same_shape(f, interior, "field and interior differ in size");
  std::size_t n = 0;
  const double mean = interior_mean(f, interior, n);
  if (n == 0) throw Error(Errc::degenerate_shape, "empty interior");
  double var = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (interior.values()[i]) var += (f.values()[i] - mean) * (f.values()[i] - mean);
  var /= static_cast<double>(n);
  const double den = var + kPresetVarEps;
  const auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };

  const int h = f.height();
  const int w = f.width();
  ScalarGrid grad(h, w, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!interior.values()[i]) continue;
    const double fi = f.values()[i];
    grad.values()[i] = (1.0 / n) / den - mean * (2.0 * (fi - mean) / n) / (den * den) + kPresetControl * sgn(fi);
  }
  const ScalarGrid lap = laplacian(f);
  for (int r = 1; r + 1 < h; ++r) {
    for (int c = 1; c + 1 < w; ++c) {
      if (!interior(r, c)) continue;
      const double s = kPresetLaplacian * sgn(lap(r, c));
      grad(r, c) -= 4.0 * s;
      grad(r - 1, c) += s;
      grad(r + 1, c) += s;
      grad(r, c - 1) += s;
      grad(r, c + 1) += s;
    }
  }
  return grad;
}

}  // namespace dtvar
