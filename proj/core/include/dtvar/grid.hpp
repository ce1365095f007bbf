#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dtvar/error.hpp"

namespace dtvar {

// Row-major storage, origin top-left. Axis x runs along columns (a step of
// (0,1) in (row, col) notation), axis y along rows.
enum class Axis { x, y };

template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int height, int width, T fill = T{}) : height_(height), width_(width) {
    if (height < 1 || width < 1) {
      throw Error(Errc::invalid_argument, "grid dimensions must be >= 1");
    }
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int row, int col) { return data_[index(row, col)]; }
  const T& operator()(int row, int col) const { return data_[index(row, col)]; }

  bool in_bounds(int row, int col) const noexcept {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  std::span<T> values() & noexcept { return data_; }
  std::span<const T> values() const& noexcept { return data_; }
  std::vector<T> values() && noexcept { return std::move(data_); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

/// Real-valued field: depth, edge probability, distance transform, weights.
using ScalarGrid = Grid<double>;

/// {0,1} field: contours, zero-crossing masks, validity masks.
using BinaryMask = Grid<std::uint8_t>;

/// H x W x C image stored channel-planar. Channels are expected in [0,1];
/// producers in this library clamp, consumers do not re-check.
class MultiChannelImage {
 public:
  MultiChannelImage() = default;
  MultiChannelImage(int height, int width, int channels, double fill = 0.0);

  /// Stacks equally-shaped grids as channels.
  static MultiChannelImage from_channels(std::span<const ScalarGrid> planes);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }

  double& operator()(int channel, int row, int col) { return data_[index(channel, row, col)]; }
  double operator()(int channel, int row, int col) const { return data_[index(channel, row, col)]; }

  ScalarGrid channel(int c) const;
  void set_channel(int c, const ScalarGrid& plane);

  bool same_shape(const MultiChannelImage& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  std::span<double> values() & noexcept { return data_; }
  std::span<const double> values() const& noexcept { return data_; }
  std::vector<double> values() && noexcept { return std::move(data_); }

  friend bool operator==(const MultiChannelImage&, const MultiChannelImage&) = default;

 private:
  std::size_t index(int channel, int row, int col) const noexcept {
    return static_cast<std::size_t>(channel) * plane_size() +
           static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Channel concatenation (e.g. RGB followed by encoded distance channels).
MultiChannelImage concat(const MultiChannelImage& a, const MultiChannelImage& b);

/// Clamps every value into [0,1].
void clamp_unit(MultiChannelImage& image);

/// Per-pixel vectors of fixed dimension (2 for gradients, 3 for normals),
/// stored interleaved.
class VectorField {
 public:
  VectorField() = default;
  VectorField(int height, int width, int dim, double fill = 0.0);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int dim() const noexcept { return dim_; }

  std::span<double> at(int row, int col) noexcept {
    return {data_.data() + offset(row, col), static_cast<std::size_t>(dim_)};
  }
  std::span<const double> at(int row, int col) const noexcept {
    return {data_.data() + offset(row, col), static_cast<std::size_t>(dim_)};
  }

  std::span<const double> values() const& noexcept { return data_; }
  std::vector<double> values() && noexcept { return std::move(data_); }

 private:
  std::size_t offset(int row, int col) const noexcept {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(col)) *
           static_cast<std::size_t>(dim_);
  }

  int height_ = 0;
  int width_ = 0;
  int dim_ = 0;
  std::vector<double> data_;
};

/// out(p) = g(p + unit(axis)) - g(p); the last column (x) or row (y) is 0.
ScalarGrid forward_diff(const ScalarGrid& g, Axis axis);

/// 5-point Laplacian with a zero 1-pixel border. Throws DimensionTooSmall when
/// either dimension is below 3.
ScalarGrid laplacian(const ScalarGrid& g);

/// 3x3 binary dilation; border pixels use the in-bounds part of the window.
BinaryMask dilate3x3(const BinaryMask& m);

/// 3x3 binary erosion with the same in-bounds window convention.
BinaryMask erode3x3(const BinaryMask& m);

std::size_t count_set(const BinaryMask& m);

/// Throws DimensionMismatch unless both operands share height and width.
template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw Error(Errc::dimension_mismatch, what);
  }
}

}  // namespace dtvar
