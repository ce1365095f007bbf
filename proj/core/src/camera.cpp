#include "dtvar/camera.hpp"

#include <cmath>

#include <Eigen/Geometry>

namespace dtvar {

void Intrinsics::validate() const {
  if (!(std::isfinite(fx) && std::isfinite(fy) && std::isfinite(cx) && std::isfinite(cy))) {
    throw Error(Errc::invalid_argument, "intrinsics must be finite");
  }
  if (!(fx > 0.0 && fy > 0.0)) throw Error(Errc::invalid_argument, "focal lengths must be positive");
}

Eigen::Matrix3d Intrinsics::matrix() const {
  Eigen::Matrix3d k;
  k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return k;
}

Eigen::Matrix3d RigidPose::rotation() const {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(rz, Vector3d::UnitZ()) * AngleAxisd(ry, Vector3d::UnitY()) *
          AngleAxisd(rx, Vector3d::UnitX()))
      .toRotationMatrix();
}

void require_positive_depth(const ScalarGrid& depth) {
  for (double v : depth.values()) {
    if (!(std::isfinite(v) && v > 0.0)) throw Error(Errc::non_positive_depth, "depth must be finite and > 0");
  }
}

VectorField backproject(const ScalarGrid& depth, const Intrinsics& k) {
  k.validate();
  require_positive_depth(depth);
  VectorField pts(depth.height(), depth.width(), 3);
  for (int r = 0; r < depth.height(); ++r) {
    for (int c = 0; c < depth.width(); ++c) {
      const double d = depth(r, c);
      auto x = pts.at(r, c);
      x[0] = d * (c - k.cx) / k.fx;
      x[1] = d * (r - k.cy) / k.fy;
      x[2] = d;
    }
  }
  return pts;
}

}  // namespace dtvar
