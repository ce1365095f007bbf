#pragma once

#include <functional>

#include "dtvar/grid.hpp"

namespace dtvar {

struct VarianceConfig {
  double mu = 10.0;
  double lr = 0.01;
  int iters = 10000;
  double tolerance = 1e-3;    // on the final mean squared Eikonal residual
  int checkpoint_every = 0;   // 0 disables the callback
  std::function<void(int, const ScalarGrid&)> on_checkpoint;
};

struct VarianceResult {
  ScalarGrid field;
  double eikonal_penalty = 0.0;  // mean over free pixels of (|grad f| - 1)^2
  bool converged = false;        // eikonal_penalty <= tolerance
};

/// Gradient descent on -Var_interior(f) + mu * sum_free (|grad f| - 1)^2,
/// free = interior minus contour, with f = 0 held on every other pixel.
///
/// |grad f| is the upwind (Godunov) slope
///   a = max(f - min(f_left, f_right), 0),  b likewise vertically,
///   s = sqrt(a^2 + b^2),
/// and each free pixel descends its own term only: the step uses
/// ds/df = (a + b) / s (1 when s = 0). This monotone scheme is what makes
/// the iteration converge; the full adjoint is a backward diffusion.
VarianceResult maximize_variance(const BinaryMask& interior, const BinaryMask& contour,
                                 const VarianceConfig& config = {});

/// Mean over free pixels of (s - 1)^2 with the slope defined above.
double eikonal_penalty(const ScalarGrid& f, const BinaryMask& interior, const BinaryMask& contour);

/// sqrt(mean over the interior of (f / max f - ref / max ref)^2); a zero
/// maximum leaves that field unscaled.
double relative_rmse(const ScalarGrid& f, const ScalarGrid& ref, const BinaryMask& interior);

/// Pearson correlation over the interior; 0 if either field is constant there.
double correlation(const ScalarGrid& f, const ScalarGrid& ref, const BinaryMask& interior);

/// Alternative objective over the interior:
///   mean / (var + 1e-6) + 0.1 * sum |lap f| + 0.01 * sum |f|
double variance_preset_loss(const ScalarGrid& f, const BinaryMask& interior);
ScalarGrid variance_preset_grad(const ScalarGrid& f, const BinaryMask& interior);

}  // namespace dtvar
