#pragma once

#include <cstddef>
#include <vector>

#include "dtvar/grid.hpp"

namespace dtvar {

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  std::size_t peak_bin() const;
  /// Counts never increase from the peak bin onward.
  bool non_increasing_after_peak() const;
  /// Counts never increase from bin `start` onward.
  bool non_increasing_from(std::size_t start) const;
  std::size_t occupied_bins() const;
};

/// Interior values binned over [min, max] of the interior; bin index
/// floor((v - min) / (max - min) * bins), clamped to bins - 1. A constant
/// field fills bin 0. Throws InvalidArgument when bins < 2.
Histogram level_set_histogram(const ScalarGrid& g, const BinaryMask& interior, int bins);

}  // namespace dtvar
