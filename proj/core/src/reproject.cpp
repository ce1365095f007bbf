#include "dtvar/reproject.hpp"

#include <algorithm>
#include <cmath>

namespace dtvar {
namespace {

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-10 ? r : v;
}

}  // namespace

WarpField warp_coords(const ScalarGrid& depth, const RigidPose& pose, const Intrinsics& k) {
  const VectorField pts = backproject(depth, k);
  const Eigen::Matrix3d rot = pose.rotation();
  const Eigen::Vector3d t = pose.translation();
  const int h = depth.height();
  const int w = depth.width();
  WarpField out{VectorField(h, w, 2), BinaryMask(h, w, 0)};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      auto p = pts.at(r, c);
      const Eigen::Vector3d q = rot * Eigen::Vector3d(p[0], p[1], p[2]) + t;
      auto uv = out.coords.at(r, c);
      if (!(q.z() > 0.0)) {
        uv[0] = c;
        uv[1] = r;
        continue;
      }
      const double x = snap(k.fx * q.x() / q.z() + k.cx);
      const double y = snap(k.fy * q.y() / q.z() + k.cy);
      uv[0] = x;
      uv[1] = y;
      out.valid(r, c) = x >= 0.0 && x <= w - 1 && y >= 0.0 && y <= h - 1;
    }
  }
  return out;
}

Sampled bilinear_sample(const MultiChannelImage& src, const VectorField& coords) {
  if (coords.dim() != 2) throw Error(Errc::dimension_mismatch, "coordinate field must have 2 components");
  const int h = coords.height();
  const int w = coords.width();
  const int sh = src.height();
  const int sw = src.width();
  Sampled out{MultiChannelImage(h, w, src.channels()), BinaryMask(h, w, 1)};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      auto uv = coords.at(r, c);
      const double x = uv[0];
      const double y = uv[1];
      if (!(std::isfinite(x) && std::isfinite(y))) throw Error(Errc::invalid_argument, "non-finite coordinate");
      const double x0f = std::floor(x);
      const double y0f = std::floor(y);
      const double fx = x - x0f;
      const double fy = y - y0f;
      const bool inside = x >= 0.0 && x <= sw - 1 && y >= 0.0 && y <= sh - 1;
      out.valid(r, c) = inside ? 1 : 0;
      auto clamp_c = [&](double v) { return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(sw - 1))); };
      auto clamp_r = [&](double v) { return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(sh - 1))); };
      const int c0 = clamp_c(x0f);
      const int c1 = clamp_c(x0f + 1.0);
      const int r0 = clamp_r(y0f);
      const int r1 = clamp_r(y0f + 1.0);
      for (int ch = 0; ch < src.channels(); ++ch) {
        const double top = fx == 0.0 ? src(ch, r0, c0) : (1.0 - fx) * src(ch, r0, c0) + fx * src(ch, r0, c1);
        if (fy == 0.0) {
          out.image(ch, r, c) = top;
        } else {
          const double bottom =
              fx == 0.0 ? src(ch, r1, c0) : (1.0 - fx) * src(ch, r1, c0) + fx * src(ch, r1, c1);
          out.image(ch, r, c) = (1.0 - fy) * top + fy * bottom;
        }
      }
    }
  }
  return out;
}

Sampled reconstruct(const MultiChannelImage& target_aug, const ScalarGrid& depth, const RigidPose& pose,
                    const Intrinsics& k) {
  const WarpField warp = warp_coords(depth, pose, k);
  Sampled out = bilinear_sample(target_aug, warp.coords);
  out.valid = [&] {
    BinaryMask joint(depth.height(), depth.width(), 0);
    for (std::size_t i = 0; i < joint.size(); ++i) joint.values()[i] = out.valid.values()[i] && warp.valid.values()[i];
    return joint;
  }();
  return out;
}

}  // namespace dtvar
