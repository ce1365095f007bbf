#pragma once

#include <cstdint>
#include <vector>

#include "dtvar/shapes.hpp"

namespace dtvar {

struct Offset {
  int dr = 0;
  int dc = 0;
};

struct ConstancyConfig {
  ShapeSpec shape;
  std::vector<Offset> motions;  // absolute per-frame displacement of the shape
  Offset track;                 // tracked point relative to the rounded centroid
  double noise_sigma = 0.02;
  int rw_dims = 3;
  double rw_eps = 0.01;
  int rw_partitions = 1000;
  std::uint64_t seed = 0;       // noise and random-walk path
};

struct ConstancyResult {
  double texture = 0.0;     // variance / mean over frames
  double dt = 0.0;
  std::vector<double> rw;   // one entry per random-walk channel
  std::vector<double> texture_samples;
  std::vector<double> dt_samples;
};

/// Population variance divided by the mean; 0 when the variance is 0 or the
/// mean is not positive. Uses pairwise differences so identical samples give
/// exactly 0.
double normalized_variance(const std::vector<double>& samples);

/// Renders the shape at each motion, with a smooth texture attached to the
/// object plus per-frame Gaussian noise, its chamfer distance transform and
/// the random-walk encoding of that transform (one path shared by all
/// frames), and samples every channel at the tracked point.
/// Throws InvalidArgument if a motion pushes the shape or the tracked point
/// off the canvas.
ConstancyResult constancy_experiment(const ConstancyConfig& config);

/// Random shape, `frames` random integer motions within +-max_motion and a
/// random tracked point inside the shape.
ConstancyConfig random_constancy_config(std::uint64_t seed, int frames, int size = 96, int max_motion = 8);

}  // namespace dtvar
