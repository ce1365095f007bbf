#include "dtvar/error.hpp"

namespace dtvar {

std::string_view error_name(Errc code) noexcept {
  switch (code) {
    case Errc::dimension_too_small: return "DimensionTooSmall";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::empty_contour: return "EmptyContour";
    case Errc::bad_dimension: return "BadDimension";
    case Errc::path_too_short: return "PathTooShort";
    case Errc::non_positive_depth: return "NonPositiveDepth";
    case Errc::not_unit_normals: return "NotUnitNormals";
    case Errc::bad_thresholds: return "BadThresholds";
    case Errc::empty_result: return "EmptyResult";
    case Errc::degenerate_shape: return "DegenerateShape";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::bad_format: return "BadFormat";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace dtvar
