#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library beyond its container types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "dtvar/grid.hpp"

namespace oracle {

using dtvar::BinaryMask;
using dtvar::MultiChannelImage;
using dtvar::ScalarGrid;

inline BinaryMask random_mask(std::mt19937_64& rng, int h, int w, double density) {
  std::bernoulli_distribution on(density);
  BinaryMask m(h, w, 0);
  for (auto& v : m.values()) v = on(rng) ? 1 : 0;
  bool any = std::any_of(m.values().begin(), m.values().end(), [](auto v) { return v != 0; });
  if (!any) m(static_cast<int>(rng() % h), static_cast<int>(rng() % w)) = 1;
  return m;
}

/// Distance to the nearest set pixel by exhaustive search.
inline ScalarGrid nearest_distance(const BinaryMask& m, bool euclidean) {
  std::vector<std::pair<int, int>> sites;
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c)
      if (m(r, c)) sites.emplace_back(r, c);
  ScalarGrid out(m.height(), m.width());
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (auto [sr, sc] : sites) {
        const double dr = r - sr;
        const double dc = c - sc;
        const double d = euclidean ? std::sqrt(dr * dr + dc * dc) : std::max(std::abs(dr), std::abs(dc));
        best = std::min(best, d);
      }
      out(r, c) = best;
    }
  }
  return out;
}

/// Breadth-first flood fill from every pixel >= high through pixels >= low.
inline BinaryMask flood_hysteresis(const ScalarGrid& e, double low, double high) {
  BinaryMask out(e.height(), e.width(), 0);
  std::queue<std::pair<int, int>> q;
  for (int r = 0; r < e.height(); ++r)
    for (int c = 0; c < e.width(); ++c)
      if (e(r, c) >= high) {
        out(r, c) = 1;
        q.emplace(r, c);
      }
  while (!q.empty()) {
    auto [r, c] = q.front();
    q.pop();
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = r + dr;
        const int cc = c + dc;
        if (!e.in_bounds(rr, cc) || out(rr, cc) || e(rr, cc) < low) continue;
        out(rr, cc) = 1;
        q.emplace(rr, cc);
      }
  }
  return out;
}

/// Number of connected components of pixels equal to `value`.
inline int count_regions(const BinaryMask& m, std::uint8_t value, bool eight) {
  BinaryMask seen(m.height(), m.width(), 0);
  int regions = 0;
  for (int r0 = 0; r0 < m.height(); ++r0) {
    for (int c0 = 0; c0 < m.width(); ++c0) {
      if ((m(r0, c0) != 0) != (value != 0) || seen(r0, c0)) continue;
      ++regions;
      std::vector<std::pair<int, int>> stack{{r0, c0}};
      seen(r0, c0) = 1;
      while (!stack.empty()) {
        auto [r, c] = stack.back();
        stack.pop_back();
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            if ((dr == 0 && dc == 0) || (!eight && dr != 0 && dc != 0)) continue;
            const int rr = r + dr;
            const int cc = c + dc;
            if (!m.in_bounds(rr, cc) || seen(rr, cc) || (m(rr, cc) != 0) != (value != 0)) continue;
            seen(rr, cc) = 1;
            stack.emplace_back(rr, cc);
          }
      }
    }
  }
  return regions;
}

inline bool has_filled_2x2(const BinaryMask& m) {
  for (int r = 0; r + 1 < m.height(); ++r)
    for (int c = 0; c + 1 < m.width(); ++c)
      if (m(r, c) && m(r + 1, c) && m(r, c + 1) && m(r + 1, c + 1)) return true;
  return false;
}

/// Single 8-connected curve, no 2x2 blocks, and a complement split into
/// exactly an inside and an outside.
inline bool is_thin_closed_loop(const BinaryMask& m) {
  return count_regions(m, 1, true) == 1 && !has_filled_2x2(m) && count_regions(m, 0, false) == 2;
}

/// Plain SSIM of one channel with 3x3 mirrored (reflect-101) windows.
inline ScalarGrid ssim_direct(const ScalarGrid& a, const ScalarGrid& b) {
  const double c1 = 1e-4;
  const double c2 = 9e-4;
  auto reflect = [](int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
  };
  ScalarGrid out(a.height(), a.width());
  for (int r = 0; r < a.height(); ++r) {
    for (int c = 0; c < a.width(); ++c) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const double x = a(reflect(r + dr, a.height()), reflect(c + dc, a.width()));
          const double y = b(reflect(r + dr, a.height()), reflect(c + dc, a.width()));
          ma += x;
          mb += y;
          saa += x * x;
          sbb += y * y;
          sab += x * y;
        }
      ma /= 9;
      mb /= 9;
      const double va = saa / 9 - ma * ma;
      const double vb = sbb / 9 - mb * mb;
      const double cov = sab / 9 - ma * mb;
      out(r, c) = (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
  }
  return out;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Smooth random field: a few low-frequency sinusoids mapped into (lo, hi).
inline ScalarGrid smooth_field(std::mt19937_64& rng, int h, int w, double lo, double hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double fx = 0.1 + 0.4 * u(rng);
  const double fy = 0.1 + 0.4 * u(rng);
  const double px = 6.283 * u(rng);
  const double py = 6.283 * u(rng);
  ScalarGrid g(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const double s = 0.5 + 0.25 * std::sin(fx * c + px) + 0.25 * std::cos(fy * r + py);
      g(r, c) = lo + (hi - lo) * s;
    }
  return g;
}

inline MultiChannelImage smooth_image(std::mt19937_64& rng, int h, int w, int channels, double lo, double hi) {
  MultiChannelImage img(h, w, channels);
  for (int ch = 0; ch < channels; ++ch) img.set_channel(ch, smooth_field(rng, h, w, lo, hi));
  return img;
}

}  // namespace oracle
