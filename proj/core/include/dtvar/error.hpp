#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtvar {

enum class Errc {
  dimension_too_small,
  dimension_mismatch,
  empty_contour,
  bad_dimension,
  path_too_short,
  non_positive_depth,
  not_unit_normals,
  bad_thresholds,
  empty_result,
  degenerate_shape,
  invalid_argument,
  bad_format,
  io_error,
};

/// CamelCase name used in CLI diagnostics, e.g. "EmptyContour".
std::string_view error_name(Errc code) noexcept;

/// Domain error raised by every dtvar operation. The code identifies the
/// failing precondition; what() carries a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dtvar
