#include "dtvar/grid.hpp"

#include <algorithm>
#include <numeric>

namespace dtvar {

MultiChannelImage::MultiChannelImage(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw Error(Errc::invalid_argument, "image dimensions must be >= 1");
  }
  data_.assign(plane_size() * static_cast<std::size_t>(channels), fill);
}

MultiChannelImage MultiChannelImage::from_channels(std::span<const ScalarGrid> planes) {
  if (planes.empty()) {
    throw Error(Errc::invalid_argument, "at least one channel required");
  }
  MultiChannelImage out(planes[0].height(), planes[0].width(), static_cast<int>(planes.size()));
  for (std::size_t c = 0; c < planes.size(); ++c) {
    out.set_channel(static_cast<int>(c), planes[c]);
  }
  return out;
}

ScalarGrid MultiChannelImage::channel(int c) const {
  if (c < 0 || c >= channels_) {
    throw Error(Errc::invalid_argument, "channel index out of range");
  }
  ScalarGrid out(height_, width_);
  auto src = std::span<const double>(data_).subspan(static_cast<std::size_t>(c) * plane_size(),
                                                   plane_size());
  std::copy(src.begin(), src.end(), out.values().begin());
  return out;
}

void MultiChannelImage::set_channel(int c, const ScalarGrid& plane) {
  if (c < 0 || c >= channels_) {
    throw Error(Errc::invalid_argument, "channel index out of range");
  }
  require_same_shape(*this, plane, "channel plane shape differs from image");
  std::copy(plane.values().begin(), plane.values().end(),
            data_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * plane_size()));
}

MultiChannelImage concat(const MultiChannelImage& a, const MultiChannelImage& b) {
  require_same_shape(a, b, "concat: images differ in size");
  MultiChannelImage out(a.height(), a.width(), a.channels() + b.channels());
  auto dst = out.values();
  std::copy(a.values().begin(), a.values().end(), dst.begin());
  std::copy(b.values().begin(), b.values().end(),
            dst.begin() + static_cast<std::ptrdiff_t>(a.values().size()));
  return out;
}

void clamp_unit(MultiChannelImage& image) {
  for (double& v : image.values()) v = std::clamp(v, 0.0, 1.0);
}

VectorField::VectorField(int height, int width, int dim, double fill)
    : height_(height), width_(width), dim_(dim) {
  if (height < 1 || width < 1 || dim < 1) {
    throw Error(Errc::invalid_argument, "vector field dimensions must be >= 1");
  }
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
                   static_cast<std::size_t>(dim),
               fill);
}

ScalarGrid forward_diff(const ScalarGrid& g, Axis axis) {
  ScalarGrid out(g.height(), g.width(), 0.0);
  const int dr = axis == Axis::y ? 1 : 0;
  const int dc = axis == Axis::x ? 1 : 0;
  for (int r = 0; r + dr < g.height(); ++r) {
    for (int c = 0; c + dc < g.width(); ++c) {
      out(r, c) = g(r + dr, c + dc) - g(r, c);
    }
  }
  return out;
}

ScalarGrid laplacian(const ScalarGrid& g) {
  if (g.height() < 3 || g.width() < 3) {
    throw Error(Errc::dimension_too_small, "laplacian needs at least a 3x3 grid");
  }
  ScalarGrid out(g.height(), g.width(), 0.0);
  for (int r = 1; r + 1 < g.height(); ++r) {
    for (int c = 1; c + 1 < g.width(); ++c) {
      out(r, c) = g(r + 1, c) + g(r - 1, c) + g(r, c + 1) + g(r, c - 1) - 4.0 * g(r, c);
    }
  }
  return out;
}

namespace {

template <typename Pred>
BinaryMask window3x3(const BinaryMask& m, Pred keep) {
  BinaryMask out(m.height(), m.width(), 0);
  for (int r = 0; r < m.height(); ++r) {
    for (int c = 0; c < m.width(); ++c) {
      int ones = 0;
      int total = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (!m.in_bounds(r + dr, c + dc)) continue;
          ++total;
          ones += m(r + dr, c + dc) ? 1 : 0;
        }
      }
      out(r, c) = keep(ones, total) ? 1 : 0;
    }
  }
  return out;
}

}  // namespace

BinaryMask dilate3x3(const BinaryMask& m) {
  return window3x3(m, [](int ones, int) { return ones > 0; });
}

BinaryMask erode3x3(const BinaryMask& m) {
  return window3x3(m, [](int ones, int total) { return ones == total; });
}

std::size_t count_set(const BinaryMask& m) {
  return static_cast<std::size_t>(
      std::count_if(m.values().begin(), m.values().end(), [](std::uint8_t v) { return v != 0; }));
}

}  // namespace dtvar
