#include "dtvar/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace dtvar {
namespace {

void require_contour(const BinaryMask& contour) {
  if (count_set(contour) == 0) throw Error(Errc::empty_contour, "contour has no set pixel");
}

// 1D squared-distance transform of sampled function f (INF = no site).
void envelope_1d(const std::vector<double>& f, std::vector<double>& out, std::vector<int>& v,
                 std::vector<double>& z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    while (k >= 0) {
      const int p = v[k];
      const double s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -inf : ((f[q] + double(q) * q) - (f[v[k - 1]] + double(v[k - 1]) * v[k - 1])) /
                               (2.0 * (q - v[k - 1]));
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), inf);
    return;
  }
  z[k + 1] = inf;
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

}  // namespace

ScalarGrid brute_force_dt(const BinaryMask& contour, Metric metric) {
  require_contour(contour);
  std::vector<std::pair<int, int>> sites;
  for (int r = 0; r < contour.height(); ++r)
    for (int c = 0; c < contour.width(); ++c)
      if (contour(r, c)) sites.emplace_back(r, c);

  ScalarGrid out(contour.height(), contour.width());
  for (int r = 0; r < contour.height(); ++r) {
    for (int c = 0; c < contour.width(); ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (auto [sr, sc] : sites) {
        const double dr = std::abs(r - sr);
        const double dc = std::abs(c - sc);
        const double d = metric == Metric::chessboard ? std::max(dr, dc) : std::sqrt(dr * dr + dc * dc);
        best = std::min(best, d);
      }
      out(r, c) = best;
    }
  }
  return out;
}

ScalarGrid chamfer_d8(const BinaryMask& contour) {
  require_contour(contour);
  const int h = contour.height();
  const int w = contour.width();
  const double far = static_cast<double>(h + w);
  ScalarGrid d(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) d(r, c) = contour(r, c) ? 0.0 : far;

  auto relax = [&](int r, int c, int rr, int cc) {
    if (d.in_bounds(rr, cc)) d(r, c) = std::min(d(r, c), d(rr, cc) + 1.0);
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      relax(r, c, r - 1, c - 1);
      relax(r, c, r - 1, c);
      relax(r, c, r - 1, c + 1);
      relax(r, c, r, c - 1);
    }
  }
  for (int r = h - 1; r >= 0; --r) {
    for (int c = w - 1; c >= 0; --c) {
      relax(r, c, r + 1, c + 1);
      relax(r, c, r + 1, c);
      relax(r, c, r + 1, c - 1);
      relax(r, c, r, c + 1);
    }
  }
  return d;
}

ScalarGrid exact_edt(const BinaryMask& contour) {
  require_contour(contour);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int h = contour.height();
  const int w = contour.width();
  const int n = std::max(h, w);
  std::vector<double> f;
  std::vector<double> out;
  std::vector<int> v(n);
  std::vector<double> z(n + 1);

  ScalarGrid sq(h, w);
  f.resize(h);
  out.resize(h);
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) f[r] = contour(r, c) ? 0.0 : inf;
    envelope_1d(f, out, v, z);
    for (int r = 0; r < h; ++r) sq(r, c) = out[r];
  }
  f.resize(w);
  out.resize(w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) f[c] = sq(r, c);
    envelope_1d(f, out, v, z);
    for (int c = 0; c < w; ++c) sq(r, c) = std::sqrt(out[c]);
  }
  return sq;
}

double eikonal_residual(const ScalarGrid& dt) {
  double worst = 0.0;
  for (Axis axis : {Axis::x, Axis::y}) {
    for (double v : forward_diff(dt, axis).values()) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

RemapFunction RemapFunction::parse(std::string_view name) {
  if (name == "identity") return Kind::identity;
  if (name == "square") return Kind::square;
  if (name == "sine") return Kind::sine;
  if (name == "parabola") return Kind::parabola;
  throw Error(Errc::invalid_argument, "unknown remap function '" + std::string(name) + "'");
}

std::string_view RemapFunction::name() const noexcept {
  switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::square: return "square";
    case Kind::sine: return "sine";
    case Kind::parabola: return "parabola";
  }
  return "identity";
}

double RemapFunction::operator()(double x) const noexcept {
  switch (kind_) {
    case Kind::identity: return x;
    case Kind::square: return x * x;
    case Kind::sine: return std::sin(std::numbers::pi * x);
    case Kind::parabola: return 4.0 * x * (1.0 - x);
  }
  return x;
}

double RemapFunction::derivative(double x) const noexcept {
  switch (kind_) {
    case Kind::identity: return 1.0;
    case Kind::square: return 2.0 * x;
    case Kind::sine: return std::numbers::pi * std::cos(std::numbers::pi * x);
    case Kind::parabola: return 4.0 - 8.0 * x;
  }
  return 1.0;
}

double RemapFunction::second_derivative(double x) const noexcept {
  switch (kind_) {
    case Kind::identity: return 0.0;
    case Kind::square: return 2.0;
    case Kind::sine: return -std::numbers::pi * std::numbers::pi * std::sin(std::numbers::pi * x);
    case Kind::parabola: return -8.0;
  }
  return 0.0;
}

double RemapFunction::k1() const noexcept {
  switch (kind_) {
    case Kind::identity: return 1.0;
    case Kind::square: return 2.0;
    case Kind::sine: return std::numbers::pi;
    case Kind::parabola: return 4.0;
  }
  return 1.0;
}

double RemapFunction::k2() const noexcept {
  switch (kind_) {
    case Kind::identity: return 0.0;
    case Kind::square: return 2.0;
    case Kind::sine: return std::numbers::pi * std::numbers::pi;
    case Kind::parabola: return 8.0;
  }
  return 0.0;
}

ScalarGrid remap(const ScalarGrid& dt, RemapFunction g) {
  const double peak = *std::max_element(dt.values().begin(), dt.values().end());
  ScalarGrid out(dt.height(), dt.width());
  std::transform(dt.values().begin(), dt.values().end(), out.values().begin(),
                 [&](double v) { return g(peak > 0.0 ? v / peak : 0.0); });
  return out;
}

}  // namespace dtvar
