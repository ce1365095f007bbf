#include "dtvar/postprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

namespace dtvar {
namespace {

constexpr std::array<std::array<int, 2>, 8> kNeighbours8{
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};
constexpr std::array<std::array<int, 2>, 4> kNeighbours4{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};

template <typename Visit>
void for_neighbours(Connectivity conn, Visit visit) {
  if (conn == Connectivity::eight) {
    for (auto [dr, dc] : kNeighbours8) visit(dr, dc);
  } else {
    for (auto [dr, dc] : kNeighbours4) visit(dr, dc);
  }
}

// Bilinear sample with coordinates clamped into the grid.
double sample(const ScalarGrid& g, double row, double col) {
  row = std::clamp(row, 0.0, static_cast<double>(g.height() - 1));
  col = std::clamp(col, 0.0, static_cast<double>(g.width() - 1));
  const int r0 = static_cast<int>(std::floor(row));
  const int c0 = static_cast<int>(std::floor(col));
  const double fr = row - r0;
  const double fc = col - c0;
  const int r1 = std::min(r0 + 1, g.height() - 1);
  const int c1 = std::min(c0 + 1, g.width() - 1);
  const double top = fc == 0.0 ? g(r0, c0) : (1.0 - fc) * g(r0, c0) + fc * g(r0, c1);
  if (fr == 0.0) return top;
  const double bottom = fc == 0.0 ? g(r1, c0) : (1.0 - fc) * g(r1, c0) + fc * g(r1, c1);
  return (1.0 - fr) * top + fr * bottom;
}

void draw_line(BinaryMask& m, int r0, int c0, int r1, int c1) {
  const int dr = std::abs(r1 - r0);
  const int dc = std::abs(c1 - c0);
  const int sr = r0 < r1 ? 1 : -1;
  const int sc = c0 < c1 ? 1 : -1;
  int err = dc - dr;
  while (true) {
    m(r0, c0) = 1;
    if (r0 == r1 && c0 == c1) break;
    const int e2 = 2 * err;
    if (e2 > -dr) {
      err -= dr;
      c0 += sc;
    }
    if (e2 < dc) {
      err += dc;
      r0 += sr;
    }
  }
}

int set_neighbours(const BinaryMask& m, int r, int c) {
  int n = 0;
  for (auto [dr, dc] : kNeighbours8) n += m.in_bounds(r + dr, c + dc) && m(r + dr, c + dc);
  return n;
}

// Steps along set pixels from (r, c), capped at limit + 1.
Grid<int> geodesic_from(const BinaryMask& m, int r, int c, int limit) {
  Grid<int> dist(m.height(), m.width(), std::numeric_limits<int>::max());
  std::deque<std::array<int, 2>> queue{{r, c}};
  dist(r, c) = 0;
  while (!queue.empty()) {
    auto [pr, pc] = queue.front();
    queue.pop_front();
    if (dist(pr, pc) > limit) continue;
    for (auto [dr, dc] : kNeighbours8) {
      const int qr = pr + dr;
      const int qc = pc + dc;
      if (!m.in_bounds(qr, qc) || !m(qr, qc) || dist(qr, qc) != std::numeric_limits<int>::max()) continue;
      dist(qr, qc) = dist(pr, pc) + 1;
      queue.push_back({qr, qc});
    }
  }
  return dist;
}

}  // namespace

Components label_components(const BinaryMask& m, Connectivity conn) {
  Components out{Grid<int>(m.height(), m.width(), -1), {}};
  std::deque<std::array<int, 2>> queue;
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) {
      if (!m(r, c) || out.labels(r, c) >= 0) continue;
      const int label = out.count();
      out.sizes.push_back(0);
      out.labels(r, c) = label;
      queue.push_back({r, c});
      while (!queue.empty()) {
        auto [pr, pc] = queue.front();
        queue.pop_front();
        ++out.sizes[static_cast<std::size_t>(label)];
        for_neighbours(conn, [&](int dr, int dc) {
          const int qr = pr + dr;
          const int qc = pc + dc;
          if (m.in_bounds(qr, qc) && m(qr, qc) && out.labels(qr, qc) < 0) {
            out.labels(qr, qc) = label;
            queue.push_back({qr, qc});
          }
        });
      }
    }
  }
  return out;
}

BinaryMask hysteresis(const ScalarGrid& e, double low, double high) {
  if (!(low < high)) throw Error(Errc::bad_thresholds, "low threshold must be below high threshold");
  BinaryMask out(e.height(), e.width(), 0);
  std::deque<std::array<int, 2>> queue;
  for (int r = 0; r < e.height(); ++r) {
    for (int c = 0; c < e.width(); ++c) {
      if (e(r, c) >= high) {
        out(r, c) = 1;
        queue.push_back({r, c});
      }
    }
  }
  while (!queue.empty()) {
    auto [pr, pc] = queue.front();
    queue.pop_front();
    for (auto [dr, dc] : kNeighbours8) {
      const int qr = pr + dr;
      const int qc = pc + dc;
      if (e.in_bounds(qr, qc) && !out(qr, qc) && e(qr, qc) >= low) {
        out(qr, qc) = 1;
        queue.push_back({qr, qc});
      }
    }
  }
  return out;
}

BinaryMask nms_gradient(const ScalarGrid& e) {
  const int h = e.height();
  const int w = e.width();
  BinaryMask out(h, w, 0);
  auto at = [&](int r, int c) { return e(std::clamp(r, 0, h - 1), std::clamp(c, 0, w - 1)); };
  auto passes = [&](int r, int c, double ur, double uc) {
    const double v = e(r, c);
    return v > sample(e, r + ur, c + uc) && v >= sample(e, r - ur, c - uc);
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double gx = 0.5 * (at(r, c + 1) - at(r, c - 1));
      double gy = 0.5 * (at(r + 1, c) - at(r - 1, c));
      const double norm = std::hypot(gx, gy);
      bool keep = false;
      if (norm > 0.0) {
        gx /= norm;
        gy /= norm;
        if (gx < 0.0 || (gx == 0.0 && gy < 0.0)) {
          gx = -gx;
          gy = -gy;
        }
        keep = passes(r, c, gy, gx);
      } else {
        keep = passes(r, c, 0.0, 1.0) || passes(r, c, 1.0, 0.0) || passes(r, c, 1.0, 1.0) ||
               passes(r, c, 1.0, -1.0);
      }
      out(r, c) = keep ? 1 : 0;
    }
  }
  return out;
}

BinaryMask edge_binary(const BinaryMask& edge_h, const BinaryMask& edge_n) {
  require_same_shape(edge_h, edge_n, "edge_binary: masks differ in size");
  BinaryMask out(edge_h.height(), edge_h.width(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values()[i] = (edge_h.values()[i] && edge_n.values()[i]) ? 1 : 0;
  }
  return out;
}

BinaryMask refine(const BinaryMask& m, const RefineParams& params) {
  BinaryMask closed = erode3x3(dilate3x3(m));

  const int gap = std::max(params.gap_max, 0);
  if (gap > 0) {
    const Components comps = label_components(closed);
    BinaryMask bridged = closed;
    for (int r = 0; r < closed.height(); ++r) {
      for (int c = 0; c < closed.width(); ++c) {
        if (!closed(r, c) || set_neighbours(closed, r, c) > 1) continue;
        const Grid<int> geo = geodesic_from(closed, r, c, 2 * gap);
        int best_r = -1;
        int best_c = -1;
        int best_d2 = gap * gap + 1;
        for (int qr = std::max(0, r - gap); qr <= std::min(closed.height() - 1, r + gap); ++qr) {
          for (int qc = std::max(0, c - gap); qc <= std::min(closed.width() - 1, c + gap); ++qc) {
            if (!closed(qr, qc)) continue;
            const int d2 = (qr - r) * (qr - r) + (qc - c) * (qc - c);
            if (d2 >= best_d2) continue;
            const bool other = comps.labels(qr, qc) != comps.labels(r, c);
            if (other || geo(qr, qc) > 2 * gap) {
              best_d2 = d2;
              best_r = qr;
              best_c = qc;
            }
          }
        }
        if (best_r >= 0) draw_line(bridged, r, c, best_r, best_c);
      }
    }
    closed = std::move(bridged);
  }

  const Components comps = label_components(closed);
  for (int r = 0; r < closed.height(); ++r) {
    for (int c = 0; c < closed.width(); ++c) {
      const int label = comps.labels(r, c);
      if (label >= 0 && comps.sizes[static_cast<std::size_t>(label)] < params.min_component) closed(r, c) = 0;
    }
  }
  return closed;
}

BinaryMask postprocess(const ScalarGrid& e, const PostprocessParams& params) {
  ScalarGrid scaled(e.height(), e.width());
  std::transform(e.values().begin(), e.values().end(), scaled.values().begin(),
                 [](double v) { return 255.0 * v; });
  const BinaryMask candidates = edge_binary(hysteresis(scaled, params.low, params.high), nms_gradient(e));
  BinaryMask out = refine(candidates, params.refine);

  BinaryMask support(e.height(), e.width(), 0);
  for (std::size_t i = 0; i < support.size(); ++i) support.values()[i] = scaled.values()[i] >= params.low;
  out = edge_binary(out, dilate3x3(support));
  if (count_set(out) == 0) throw Error(Errc::empty_result, "no contour survived post-processing");
  return out;
}

}  // namespace dtvar
