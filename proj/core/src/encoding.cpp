#include "dtvar/encoding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dtvar/random.hpp"

namespace dtvar {

RandomWalkPath::RandomWalkPath(int dim, double eps, int partitions, std::uint64_t seed,
                               std::vector<double> coords)
    : dim_(dim), eps_(eps), partitions_(partitions), seed_(seed), coords_(std::move(coords)) {
  if (dim < 1 || dim > 4) throw Error(Errc::bad_dimension, "random walk dimension must be 1..4");
  if (coords_.empty() || coords_.size() % static_cast<std::size_t>(dim) != 0) {
    throw Error(Errc::invalid_argument, "random walk coordinates do not match dimension");
  }
}

RandomWalkPath make_rw_path(int dim, int steps, double eps, int partitions, std::uint64_t seed) {
  if (dim < 1 || dim > 4) {
    throw Error(Errc::bad_dimension, "random walk dimension must be 1..4, got " + std::to_string(dim));
  }
  if (steps < 1) throw Error(Errc::invalid_argument, "random walk needs at least one step");
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "random walk step must be positive");
  if (partitions < 2) throw Error(Errc::invalid_argument, "random walk needs at least two partitions");

  constexpr double pi = std::numbers::pi;
  Rng rng(seed);
  const auto k = static_cast<std::uint64_t>(partitions);
  auto polar = [&] { return pi * (static_cast<double>(rng.below(k)) + 0.5) / partitions; };
  auto azimuth = [&] { return 2.0 * pi * static_cast<double>(rng.below(k)) / partitions; };

  std::vector<double> coords(static_cast<std::size_t>(steps + 1) * dim, 0.0);
  std::array<double, 4> u{};
  for (int i = 1; i <= steps; ++i) {
    switch (dim) {
      case 1:
        u[0] = rng.below(2) ? 1.0 : -1.0;
        break;
      case 2: {
        const double t = azimuth();
        u = {std::cos(t), std::sin(t)};
        break;
      }
      case 3: {
        const double t = polar();
        const double p = azimuth();
        u = {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
        break;
      }
      default: {
        const double a = polar();
        const double b = polar();
        const double p = azimuth();
        u = {std::cos(a), std::sin(a) * std::cos(b), std::sin(a) * std::sin(b) * std::cos(p),
             std::sin(a) * std::sin(b) * std::sin(p)};
        break;
      }
    }
    const std::size_t prev = static_cast<std::size_t>(i - 1) * dim;
    const std::size_t cur = static_cast<std::size_t>(i) * dim;
    for (int d = 0; d < dim; ++d) coords[cur + d] = coords[prev + d] + eps * u[d];
  }
  return RandomWalkPath(dim, eps, partitions, seed, std::move(coords));
}

MultiChannelImage rw_encode(const ScalarGrid& dt, const RandomWalkPath& path) {
  const int dim = path.dim();
  std::array<double, 4> lo{};
  std::array<double, 4> span{};
  for (int d = 0; d < dim; ++d) {
    double mn = path.point(0)[d];
    double mx = mn;
    for (int i = 1; i <= path.steps(); ++i) {
      mn = std::min(mn, path.point(i)[d]);
      mx = std::max(mx, path.point(i)[d]);
    }
    lo[d] = mn;
    span[d] = mx - mn;
  }

  MultiChannelImage out(dt.height(), dt.width(), dim);
  for (int r = 0; r < dt.height(); ++r) {
    for (int c = 0; c < dt.width(); ++c) {
      const double v = dt(r, c);
      if (!(v >= 0.0)) throw Error(Errc::invalid_argument, "distance values must be nonnegative");
      const double idx = std::round(v);
      if (idx > path.steps()) {
        throw Error(Errc::path_too_short, "distance " + std::to_string(idx) + " exceeds path length " +
                                              std::to_string(path.steps()));
      }
      auto x = path.point(static_cast<int>(idx));
      for (int d = 0; d < dim; ++d) out(d, r, c) = span[d] > 0.0 ? (x[d] - lo[d]) / span[d] : 0.0;
    }
  }
  return out;
}

}  // namespace dtvar
