#include "dtvar/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Geometry>

namespace dtvar {
namespace {

void require_unit_normals(const VectorField& n) {
  if (n.dim() != 3) throw Error(Errc::dimension_mismatch, "normal field must have 3 components");
  for (int r = 0; r < n.height(); ++r) {
    for (int c = 0; c < n.width(); ++c) {
      auto v = n.at(r, c);
      const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      if (!(std::abs(norm - 1.0) <= 1e-4)) throw Error(Errc::not_unit_normals, "normal is not unit length");
    }
  }
}

ScalarGrid component(const VectorField& n, int k) {
  ScalarGrid out(n.height(), n.width());
  for (int r = 0; r < n.height(); ++r)
    for (int c = 0; c < n.width(); ++c) out(r, c) = n.at(r, c)[static_cast<std::size_t>(k)];
  return out;
}

ScalarGrid weight_map(const BinaryMask& z, const ScalarGrid& grad, bool& empty) {
  ScalarGrid w(grad.height(), grad.width(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w.values()[i] = z.values()[i] ? grad.values()[i] : 0.0;
    total += w.values()[i];
  }
  empty = !(total > 0.0);
  if (empty) {
    std::fill(w.values().begin(), w.values().end(), 0.0);
  } else {
    for (double& v : w.values()) v /= total;
  }
  return w;
}

}  // namespace

BinaryMask zero_crossings(const ScalarGrid& lap) {
  BinaryMask out(lap.height(), lap.width(), 0);
  for (int r = 0; r < lap.height(); ++r) {
    for (int c = 0; c < lap.width(); ++c) {
      const double v = lap(r, c);
      const bool down = r + 1 < lap.height() && v * lap(r + 1, c) < 0.0;
      const bool right = c + 1 < lap.width() && v * lap(r, c + 1) < 0.0;
      out(r, c) = (down || right) ? 1 : 0;
    }
  }
  return out;
}

ScalarGrid norm_depth_diff(const ScalarGrid& depth, Axis axis) {
  require_positive_depth(depth);
  ScalarGrid out(depth.height(), depth.width(), 0.0);
  const int dr = axis == Axis::y ? 1 : 0;
  const int dc = axis == Axis::x ? 1 : 0;
  for (int r = 0; r + dr < depth.height(); ++r) {
    for (int c = 0; c + dc < depth.width(); ++c) {
      const double a = depth(r, c);
      const double b = depth(r + dr, c + dc);
      out(r, c) = (b - a) / std::max(a, b);
    }
  }
  return out;
}

ScalarGrid norm_depth_grad(const ScalarGrid& depth) {
  ScalarGrid gx = norm_depth_diff(depth, Axis::x);
  ScalarGrid gy = norm_depth_diff(depth, Axis::y);
  for (std::size_t i = 0; i < gx.size(); ++i) {
    gx.values()[i] = std::abs(gx.values()[i]) + std::abs(gy.values()[i]);
  }
  return gx;
}

ScalarGrid normal_diff(const VectorField& n, Axis axis) {
  require_unit_normals(n);
  ScalarGrid out(n.height(), n.width(), 0.0);
  const int dr = axis == Axis::y ? 1 : 0;
  const int dc = axis == Axis::x ? 1 : 0;
  for (int r = 0; r + dr < n.height(); ++r) {
    for (int c = 0; c + dc < n.width(); ++c) {
      auto a = n.at(r, c);
      auto b = n.at(r + dr, c + dc);
      out(r, c) = 1.0 - std::abs(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
    }
  }
  return out;
}

ScalarGrid normal_gap(const VectorField& n) {
  ScalarGrid gx = normal_diff(n, Axis::x);
  ScalarGrid gy = normal_diff(n, Axis::y);
  for (std::size_t i = 0; i < gx.size(); ++i) gx.values()[i] = std::abs(gx.values()[i]) + std::abs(gy.values()[i]);
  return gx;
}

BinaryMask normal_zero_crossings(const VectorField& n) {
  BinaryMask out(n.height(), n.width(), 0);
  for (int k = 0; k < n.dim(); ++k) {
    BinaryMask z = zero_crossings(laplacian(component(n, k)));
    for (std::size_t i = 0; i < z.size(); ++i) out.values()[i] |= z.values()[i];
  }
  return out;
}

PseudoLabelPair pseudo_labels(const ScalarGrid& depth, const VectorField& normals) {
  require_same_shape(depth, normals, "depth and normals differ in size");
  PseudoLabelPair out;
  const ScalarGrid grad_d = norm_depth_grad(depth);
  const ScalarGrid grad_n = normal_gap(normals);
  const BinaryMask z_d = dilate3x3(zero_crossings(laplacian(depth)));
  const BinaryMask z_n = dilate3x3(normal_zero_crossings(normals));
  out.w_d = weight_map(z_d, grad_d, out.depth_empty);
  out.w_n = weight_map(z_n, grad_n, out.normal_empty);
  return out;
}

VectorField normals_from_depth(const ScalarGrid& depth, const Intrinsics& k) {
  if (depth.height() < 2 || depth.width() < 2) {
    throw Error(Errc::dimension_too_small, "normals need at least a 2x2 depth grid");
  }
  const VectorField pts = backproject(depth, k);
  const int h = depth.height();
  const int w = depth.width();
  VectorField out(h, w, 3);
  auto vec = [&](int r, int c) {
    auto p = pts.at(r, c);
    return Eigen::Vector3d(p[0], p[1], p[2]);
  };
  for (int r = 0; r + 1 < h; ++r) {
    for (int c = 0; c + 1 < w; ++c) {
      const Eigen::Vector3d p = vec(r, c);
      const Eigen::Vector3d tx = vec(r, c + 1) - p;
      const Eigen::Vector3d ty = vec(r + 1, c) - p;
      Eigen::Vector3d nrm = ty.cross(tx);
      const double len = nrm.norm();
      if (len > 0.0) {
        nrm /= len;
      } else {
        nrm = Eigen::Vector3d(0.0, 0.0, -1.0);
      }
      if (nrm.dot(p) > 0.0) nrm = -nrm;
      auto o = out.at(r, c);
      o[0] = nrm.x();
      o[1] = nrm.y();
      o[2] = nrm.z();
    }
  }
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (r + 1 < h && c + 1 < w) continue;
      auto src = out.at(std::min(r, h - 2), std::min(c, w - 2));
      auto dst = out.at(r, c);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  }
  return out;
}

}  // namespace dtvar
