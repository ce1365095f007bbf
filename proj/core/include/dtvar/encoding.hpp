#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dtvar/grid.hpp"

namespace dtvar {

/// Fixed-step random walk X_0..X_N starting at the origin. Directions are
/// drawn from k equal angle bins per angular coordinate.
class RandomWalkPath {
 public:
  RandomWalkPath(int dim, double eps, int partitions, std::uint64_t seed, std::vector<double> coords);

  int dim() const noexcept { return dim_; }
  double eps() const noexcept { return eps_; }
  int partitions() const noexcept { return partitions_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// N, the number of steps; there are N+1 points.
  int steps() const noexcept { return static_cast<int>(coords_.size() / dim_) - 1; }
  std::span<const double> point(int i) const {
    return std::span<const double>(coords_).subspan(static_cast<std::size_t>(i) * dim_, dim_);
  }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const RandomWalkPath&, const RandomWalkPath&) = default;

 private:
  int dim_;
  double eps_;
  int partitions_;
  std::uint64_t seed_;
  std::vector<double> coords_;
};

inline constexpr double default_rw_eps = 0.01;
inline constexpr int default_rw_partitions = 1000;

/// dim 1 steps +-eps; dim 2 uses theta = 2*pi*j/k; dims 3 and 4 use
/// hyperspherical coordinates with polar angles pi*(j+0.5)/k and azimuth
/// 2*pi*j/k. Throws BadDimension for dim outside 1..4.
RandomWalkPath make_rw_path(int dim, int steps, double eps = default_rw_eps,
                            int partitions = default_rw_partitions, std::uint64_t seed = 0);

/// Looks up X_round(dt) per pixel; channel d is rescaled to [0,1] with the
/// min/max of coordinate d over the whole path. Throws PathTooShort.
MultiChannelImage rw_encode(const ScalarGrid& dt, const RandomWalkPath& path);

}  // namespace dtvar
