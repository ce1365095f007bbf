#pragma once

#include <cstdint>
#include <vector>

#include "dtvar/grid.hpp"
#include "dtvar/shapes.hpp"

namespace dtvar {

enum class Fill { uniform, dt };

Fill parse_fill(std::string_view name);

/// uniform: 1 on the interior; dt: exact Euclidean distance to the contour
/// (in pixels) on the interior. 0 outside.
ScalarGrid filled_shape(const Shape& shape, Fill fill);

struct TranslationConfig {
  Point2 true_shift;     // target = source moved by this (x = columns, y = rows)
  Point2 initial_shift;  // starting estimate
  double lr = 1.0;
  int max_iters = 2000;
  double tol = 0.5;      // on |estimate - true_shift| in pixels
};

struct TranslationRecord {
  std::vector<double> loss;   // per iteration, before the update
  std::vector<double> error;  // |estimate - true_shift| per iteration
  int iterations = 0;         // first iteration with error < tol, or max_iters
  bool converged = false;
  Point2 estimate;
};

/// Warped source W(p) = A(p - shift), bilinear, zero outside the canvas.
ScalarGrid shift_bilinear(const ScalarGrid& a, Point2 shift);

/// Mean over the canvas of (W - B)^2 and its gradient with respect to the
/// shift.
double shift_loss(const ScalarGrid& a, const ScalarGrid& b, Point2 shift, Point2* grad = nullptr);

/// Per-pixel contributions to the shift gradient (dim 2: x, y); they sum to
/// the gradient returned by shift_loss.
VectorField shift_gradient_map(const ScalarGrid& a, const ScalarGrid& b, Point2 shift);

/// Gradient descent on the shift between A = filled_shape(shape, fill) and
/// B = shift_bilinear(A, true_shift). Loss and gradient are evaluated on the
/// bounding box of both supports, which is exact since W = B = 0 elsewhere.
TranslationRecord translation_recovery(const Shape& shape, Fill fill, const TranslationConfig& config);

struct TranslationTrial {
  ShapeSpec spec;
  Point2 true_shift;
  Point2 initial_shift;
  int uniform_iterations = 0;
  int dt_iterations = 0;
};

/// Paired comparison on random rectangles: integer true shifts in [-5, 5]^2
/// and a starting error of length 5 in a random direction, identical for
/// both fills.
std::vector<TranslationTrial> translation_trials(int trials, std::uint64_t seed, int canvas = 128,
                                                 const TranslationConfig& base = {});

}  // namespace dtvar
