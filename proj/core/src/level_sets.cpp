#include "dtvar/level_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dtvar {

std::size_t Histogram::peak_bin() const {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

bool Histogram::non_increasing_from(std::size_t start) const {
  for (std::size_t i = start + 1; i < counts.size(); ++i) {
    if (counts[i] > counts[i - 1]) return false;
  }
  return true;
}

bool Histogram::non_increasing_after_peak() const { return non_increasing_from(peak_bin()); }

std::size_t Histogram::occupied_bins() const {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](std::size_t n) { return n > 0; }));
}

Histogram level_set_histogram(const ScalarGrid& g, const BinaryMask& interior, int bins) {
  if (bins < 2) throw Error(Errc::invalid_argument, "histogram needs at least two bins");
  require_same_shape(g, interior, "histogram: field and interior differ in size");
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!interior.values()[i]) continue;
    lo = std::min(lo, g.values()[i]);
    hi = std::max(hi, g.values()[i]);
  }
  if (lo > hi) return h;
  h.lo = lo;
  h.hi = hi;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!interior.values()[i]) continue;
    std::size_t bin = 0;
    if (hi > lo) {
      const double t = std::floor((g.values()[i] - lo) / (hi - lo) * bins);
      bin = static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(bins - 1)));
    }
    ++h.counts[bin];
  }
  return h;
}

}  // namespace dtvar
