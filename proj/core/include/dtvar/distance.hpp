#pragma once

#include <string_view>

#include "dtvar/grid.hpp"

namespace dtvar {

enum class Metric { chessboard, euclidean };

/// O(H*W*|C|) reference: min over contour pixels of the metric distance.
/// Throws EmptyContour.
ScalarGrid brute_force_dt(const BinaryMask& contour, Metric metric);

/// Two-pass d8 chamfer transform; integer valued and identical to the
/// chessboard brute force.
ScalarGrid chamfer_d8(const BinaryMask& contour);

/// Exact Euclidean transform via lower envelopes of parabolas (separable,
/// columns then rows, on squared distances).
ScalarGrid exact_edt(const BinaryMask& contour);

/// Largest absolute forward difference along either axis.
double eikonal_residual(const ScalarGrid& dt);

/// One-dimensional remapping g on [0,1].
class RemapFunction {
 public:
  enum class Kind { identity, square, sine, parabola };

  constexpr RemapFunction(Kind kind = Kind::identity) noexcept : kind_(kind) {}

  /// Accepts "identity", "square", "sine", "parabola".
  static RemapFunction parse(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;

  double operator()(double x) const noexcept;
  double derivative(double x) const noexcept;
  double second_derivative(double x) const noexcept;

  /// sup |g'| and sup |g''| on [0,1].
  double k1() const noexcept;
  double k2() const noexcept;

  friend bool operator==(RemapFunction, RemapFunction) = default;

 private:
  Kind kind_;
};

/// Divides by the image maximum, then applies g; a zero maximum maps every
/// pixel to g(0).
ScalarGrid remap(const ScalarGrid& dt, RemapFunction g);

}  // namespace dtvar
