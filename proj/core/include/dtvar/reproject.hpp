#pragma once

#include "dtvar/camera.hpp"
#include "dtvar/grid.hpp"

namespace dtvar {

struct WarpField {
  VectorField coords;  // dim 2: (x = column, y = row) in the source image
  BinaryMask valid;    // in bounds and in front of the camera
};

/// p' = pi(K (R X(p) + t)). Coordinates within 1e-10 of an integer are
/// snapped to it. Pixels whose transformed depth is not positive keep their
/// own coordinates and are marked invalid.
WarpField warp_coords(const ScalarGrid& depth, const RigidPose& pose, const Intrinsics& k);

struct Sampled {
  MultiChannelImage image;
  BinaryMask valid;  // 0 where a tap with nonzero weight fell outside src
};

/// Four-tap bilinear interpolation; taps are clamped to the border. A zero
/// fractional part collapses to a single tap so integer coordinates copy
/// exactly. Throws DimensionMismatch unless coords is a dim-2 field.
Sampled bilinear_sample(const MultiChannelImage& src, const VectorField& coords);

/// bilinear_sample(target, warp_coords(D_t, pose, K)); valid is the joint mask.
Sampled reconstruct(const MultiChannelImage& target_aug, const ScalarGrid& depth, const RigidPose& pose,
                    const Intrinsics& k);

}  // namespace dtvar
