#pragma once

#include <vector>

#include "dtvar/grid.hpp"

namespace dtvar {

enum class Connectivity { four = 4, eight = 8 };

struct Components {
  Grid<int> labels;        // -1 on unset pixels, else 0..count-1
  std::vector<int> sizes;  // pixel count per label
  int count() const noexcept { return static_cast<int>(sizes.size()); }
};

/// Raster-order labelling of set pixels.
Components label_components(const BinaryMask& m, Connectivity conn = Connectivity::eight);

/// Pixels with e >= low that reach a pixel >= high through 8-connected
/// pixels >= low. e is on the 0..255 scale. Throws BadThresholds unless low < high.
BinaryMask hysteresis(const ScalarGrid& e, double low, double high);

/// Keeps p when E(p) > E(p+u) and E(p) >= E(p-u), with u the unit gradient
/// (central differences) oriented so u.x > 0, or u.x == 0 and u.y > 0;
/// neighbours are sampled bilinearly with border clamping. Where the
/// gradient vanishes the same rule is tried along the four axis and diagonal
/// directions and the pixel is kept if any of them passes.
BinaryMask nms_gradient(const ScalarGrid& e);

/// Pixelwise AND. Throws DimensionMismatch.
BinaryMask edge_binary(const BinaryMask& edge_h, const BinaryMask& edge_n);

struct RefineParams {
  int min_component = 20;
  int gap_max = 3;
};

/// 3x3 closing, then endpoint bridging, then removal of 8-connected
/// components smaller than min_component.
///
/// An endpoint is a set pixel with at most one set 8-neighbour. It is joined
/// by a Bresenham segment to the nearest set pixel within gap_max (Euclidean)
/// that lies in another component, or in the same component but more than
/// 2*gap_max steps away along it.
BinaryMask refine(const BinaryMask& m, const RefineParams& params = {});

struct PostprocessParams {
  double low = 80.0;
  double high = 100.0;
  RefineParams refine;
};

/// refine(edge_binary(hysteresis(255 E, low, high), nms_gradient(E))),
/// restricted to dilate3x3(255 E >= low). Throws EmptyResult when nothing
/// survives.
BinaryMask postprocess(const ScalarGrid& e, const PostprocessParams& params = {});

}  // namespace dtvar
