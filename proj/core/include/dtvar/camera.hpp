#pragma once

#include <Eigen/Core>

#include "dtvar/grid.hpp"

namespace dtvar {

/// Pinhole intrinsics in pixels; u runs along columns, v along rows.
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  /// Throws InvalidArgument unless fx, fy > 0 and all values are finite.
  void validate() const;
  Eigen::Matrix3d matrix() const;
};

/// Euler angles (radians) and translation. R = Rz * Ry * Rx.
struct RigidPose {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;
  double tx = 0.0;
  double ty = 0.0;
  double tz = 0.0;

  Eigen::Matrix3d rotation() const;
  Eigen::Vector3d translation() const { return {tx, ty, tz}; }
};

/// Throws NonPositiveDepth unless every value is finite and > 0.
void require_positive_depth(const ScalarGrid& depth);

/// X(p) = D(p) * K^-1 * (u, v, 1); dim-3 field.
VectorField backproject(const ScalarGrid& depth, const Intrinsics& k);

}  // namespace dtvar
