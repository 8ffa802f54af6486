#pragma once

#include "fasthcs/common.hpp"

#include <span>

namespace fasthcs::stats {

/// Median; the mean of the two middle values for even sizes.
double median(std::vector<double> values);

/// Unscaled median absolute deviation about the median.
double mad(const std::vector<double>& values);

/// Linear-interpolation quantile (R type 7). Infinite neighbours propagate.
double quantile(std::vector<double> values, double prob);

/// Sample variance with divisor (count - 1).
double sample_variance(std::span<const double> values);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

double chi2_cdf(double x, double df);
double chi2_quantile(double prob, double df);

double normal_cdf(double x);
/// Computed through the one-degree-of-freedom chi-square quantile.
double normal_quantile(double prob);

}  // namespace fasthcs::stats
