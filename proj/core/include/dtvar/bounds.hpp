#pragma once

#include <cstdint>

#include "dtvar/distance.hpp"
#include "dtvar/shapes.hpp"

namespace dtvar {

// Lengths in this module are normalised by M, the largest interior distance,
// so that the normalised distance field lies in [0, 1] and has unit slope.

struct BoundEstimates {
  double k1 = 0.0;          // sup |g'|
  double k2 = 0.0;          // sup |g''|
  double k3 = 0.0;          // max boundary curvature
  double alpha_hat = 0.0;   // max |l(u) - l(v)| / |u - v| over sampled pairs
  double beta_hat = 0.0;    // same ratio for grad l
  double alpha_bound = 0.0; // 4 K1
  double beta_bound = 0.0;  // 2 alpha K1 + 4 K2 + 4 K1 K3
  double eta = 0.0;
  bool lipschitz_ok = false;  // alpha_hat <= 4 K1 (1 + slack)
};

inline constexpr double bound_slack = 0.05;

/// l(u) = (g(d(u)) - g(d(y)))^2 with d the normalised exact EDT of the
/// contour, bilinearly interpolated. Half the pairs are uniform over the
/// interior, half are local (|u - v| <= 1.5 px). grad l uses central
/// differences of 0.25 px. K3 comes from turning angles of the contour
/// traced by angle around its centroid, over a 5-pixel baseline.
BoundEstimates estimate_bounds(RemapFunction g, const Shape& shape, Point2 y, int samples,
                               std::uint64_t seed, double eta = 0.0);

/// Minimum eigenvalue of the 2x2 finite-difference Hessian (1 px step) of
/// l(u) + eta |u - y|^2 over integer points u with |u - y| <= radius.
double convexity_check(RemapFunction g, const Shape& shape, Point2 y, double eta, double radius);

/// Normalised l(u) for callers that want to probe it directly.
double target_loss(RemapFunction g, const ScalarGrid& normalized_dt, Point2 y, Point2 u);

}  // namespace dtvar
