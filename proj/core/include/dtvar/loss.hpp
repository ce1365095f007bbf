#pragma once

#include "dtvar/contour.hpp"
#include "dtvar/grid.hpp"

namespace dtvar {

struct LossWeights {
  double lambda_d = 0.5;
  double lambda_n = 0.25;
  double lambda_e = 1.0;
  double lambda_c = 0.001;
  double lambda_photo = 1.0;
  double lambda_dist = 1.0;
  double lambda_s = 0.001;
  double lambda_ns = 0.01;
  double alpha_edge = 5.0;
  double ssim_weight = 0.85;

  /// Throws InvalidArgument if any weight is negative or not finite, or
  /// ssim_weight exceeds 1.
  void validate() const;
};

inline constexpr double ssim_c1 = 0.01 * 0.01;
inline constexpr double ssim_c2 = 0.03 * 0.03;

/// Per-pixel SSIM of a single channel: 3x3 mean pooling, reflect padding.
ScalarGrid ssim_channel(const ScalarGrid& a, const ScalarGrid& b);

/// Per-pixel SSIM averaged over channels. Throws DimensionMismatch.
ScalarGrid ssim(const MultiChannelImage& a, const MultiChannelImage& b);

/// Mean over pixels and channels of
///   ssim_weight * (1 - SSIM) / 2 + (1 - ssim_weight) * |rec - target|.
/// With a mask, only pixels where it is set are averaged (SSIM statistics
/// still use the full neighbourhood); an empty mask gives 0.
double photometric(const MultiChannelImage& rec, const MultiChannelImage& target,
                   double ssim_weight = 0.85, const BinaryMask* mask = nullptr);

/// d photometric / d rec. |x| uses sign(0) = 0.
MultiChannelImage photometric_grad(const MultiChannelImage& rec, const MultiChannelImage& target,
                                   double ssim_weight = 0.85, const BinaryMask* mask = nullptr);

/// Mean absolute difference over pixels and channels.
double dist_loss(const MultiChannelImage& rec_dt, const MultiChannelImage& dt,
                 const BinaryMask* mask = nullptr);
MultiChannelImage dist_loss_grad(const MultiChannelImage& rec_dt, const MultiChannelImage& dt,
                                 const BinaryMask* mask = nullptr);

struct SmoothTerms {
  double s1 = 0.0;
  double s2 = 0.0;
  double total() const noexcept { return s1 + s2; }
};

/// Contour-aware smoothness, summed over pixels:
///   s1 = sum |grad D| exp(-alpha E)
///   s2 = sum log(1 + exp(-|grad D|)) (1 - exp(-alpha E))
/// with |grad D| the ratio-normalized gradient magnitude.
SmoothTerms smooth_s(const ScalarGrid& depth, const ScalarGrid& edge, double alpha);

struct SmoothGrad {
  ScalarGrid d_depth;
  ScalarGrid d_edge;
};

/// Gradient of s1 + s2.
SmoothGrad smooth_s_grad(const ScalarGrid& depth, const ScalarGrid& edge, double alpha);

/// Image-gradient-aware smoothness, summed over pixels:
///   sum |dD_x| exp(-|dI_x|) + |dD_y| exp(-|dI_y|)
/// where |dI| is the mean over channels of the absolute forward difference.
double baseline_smooth(const ScalarGrid& depth, const MultiChannelImage& image);
ScalarGrid baseline_smooth_grad(const ScalarGrid& depth, const MultiChannelImage& image);

/// Same weighting applied to the normal dot-product gap.
double normal_smooth(const VectorField& normals, const MultiChannelImage& image);

struct EdgeTerms {
  double pseudo = 0.0;    // sum (ld w_d + ln w_n)(1 - E)
  double contrast = 0.0;  // BCE sum against Y = [E >= 0.5]
  double energy = 0.0;    // sum E^2
  double total = 0.0;     // pseudo + lc contrast + le energy
};

inline constexpr double bce_clamp = 1e-6;

EdgeTerms edge_supervision(const ScalarGrid& edge, const PseudoLabelPair& labels, const LossWeights& w);

/// d total / d E with Y held fixed; zero BCE slope where E is clamped.
ScalarGrid edge_supervision_grad(const ScalarGrid& edge, const PseudoLabelPair& labels,
                                 const LossWeights& w);

struct DepthLossParts {
  double dist = 0.0;
  double photo = 0.0;
  double smooth = 0.0;
  double normal_smooth = 0.0;
};

/// ldist dist + lphoto photo + ls smooth + lns normal_smooth.
double depth_total(const DepthLossParts& parts, const LossWeights& w);

}  // namespace dtvar
