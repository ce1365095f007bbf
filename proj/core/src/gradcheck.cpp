#include "dtvar/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace dtvar {

std::vector<double> numeric_gradient(const FlatLoss& loss, std::span<const double> x, double step) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = loss(probe);
    probe[i] = x[i] - step;
    const double down = loss(probe);
    probe[i] = x[i];
    out[i] = (up - down) / (2.0 * step);
  }
  return out;
}

double finite_diff_check(const FlatLoss& loss, std::span<const double> analytic, std::span<const double> x,
                         double step) {
  if (analytic.size() != x.size()) throw Error(Errc::dimension_mismatch, "gradient and point differ in size");
  const std::vector<double> numeric = numeric_gradient(loss, x, step);
  double diff = 0.0;
  double scale = 1e-300;
  for (std::size_t i = 0; i < x.size(); ++i) {
    diff = std::max(diff, std::abs(analytic[i] - numeric[i]));
    scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
  }
  return diff / scale;
}

double finite_diff_check(const std::function<double(const ScalarGrid&)>& loss, const ScalarGrid& analytic,
                         const ScalarGrid& x, double step) {
  require_same_shape(analytic, x, "gradient and point differ in size");
  ScalarGrid probe = x;
  auto flat = [&](std::span<const double> v) {
    std::copy(v.begin(), v.end(), probe.values().begin());
    return loss(probe);
  };
  return finite_diff_check(flat, analytic.values(), x.values(), step);
}

double finite_diff_check(const std::function<double(const MultiChannelImage&)>& loss,
                         const MultiChannelImage& analytic, const MultiChannelImage& x, double step) {
  if (!analytic.same_shape(x)) throw Error(Errc::dimension_mismatch, "gradient and point differ in shape");
  MultiChannelImage probe = x;
  auto flat = [&](std::span<const double> v) {
    std::copy(v.begin(), v.end(), probe.values().begin());
    return loss(probe);
  };
  return finite_diff_check(flat, analytic.values(), x.values(), step);
}

}  // namespace dtvar
