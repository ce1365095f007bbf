#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dtvar/grid.hpp"

namespace dtvar {

using FlatLoss = std::function<double(std::span<const double>)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every i.
std::vector<double> numeric_gradient(const FlatLoss& loss, std::span<const double> x, double step);

/// max_i |analytic_i - numeric_i| / max(||analytic||_inf, ||numeric||_inf),
/// with the denominator floored at 1e-300. Throws DimensionMismatch when
/// the gradient and point sizes differ.
double finite_diff_check(const FlatLoss& loss, std::span<const double> analytic, std::span<const double> x,
                         double step);

double finite_diff_check(const std::function<double(const ScalarGrid&)>& loss, const ScalarGrid& analytic,
                         const ScalarGrid& x, double step);

double finite_diff_check(const std::function<double(const MultiChannelImage&)>& loss,
                         const MultiChannelImage& analytic, const MultiChannelImage& x, double step);

}  // namespace dtvar
