#pragma once

#include "dtvar/camera.hpp"
#include "dtvar/grid.hpp"

namespace dtvar {

/// 1 where lap changes sign strictly against the next row or next column.
BinaryMask zero_crossings(const ScalarGrid& lap);

/// |dx| + |dy| of the ratio-normalized forward differences
/// (D(q) - D(p)) / max(D(q), D(p)). Throws NonPositiveDepth.
ScalarGrid norm_depth_grad(const ScalarGrid& depth);

/// Signed normalized forward difference along one axis; 0 on the far edge.
ScalarGrid norm_depth_diff(const ScalarGrid& depth, Axis axis);

/// 1 - |<N(q), N(p)>| along one axis; 0 on the far edge.
ScalarGrid normal_diff(const VectorField& normals, Axis axis);

/// Sum of normal_diff over both axes. Throws NotUnitNormals when a norm is
/// off by more than 1e-4, DimensionMismatch unless dim == 3.
ScalarGrid normal_gap(const VectorField& normals);

/// Union of the zero crossings of each component's Laplacian.
BinaryMask normal_zero_crossings(const VectorField& normals);

struct PseudoLabelPair {
  ScalarGrid w_d;
  ScalarGrid w_n;
  bool depth_empty = false;   // no weight mass; w_d is all zero
  bool normal_empty = false;  // same for w_n
};

/// w = Z * |grad| / sum(Z * |grad|) with Z the dilated zero-crossing mask.
PseudoLabelPair pseudo_labels(const ScalarGrid& depth, const VectorField& normals);

/// Cross product of the back-projected forward tangents, oriented toward the
/// camera; the last row and column copy the nearest interior normal.
VectorField normals_from_depth(const ScalarGrid& depth, const Intrinsics& k);

}  // namespace dtvar
