#include "fasthcs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fasthcs::stats {

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty sample");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double mad(const std::vector<double>& values) {
  const double med = median(values);
  std::vector<double> dev(values.size());
  std::transform(values.begin(), values.end(), dev.begin(),
                 [med](double v) { return std::abs(v - med); });
  return median(std::move(dev));
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  if (prob < 0.0 || prob > 1.0) throw InputError("quantile probability out of range");
  std::sort(values.begin(), values.end());
  const double pos = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  if (std::isinf(values[lo]) || std::isinf(values[hi])) {
    return std::isinf(values[hi]) ? values[hi] : values[lo];
  }
  return values[lo] + frac * (values[hi] - values[lo]);
}

double sample_variance(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(n - 1);
}

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

double gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by the modified Lentz continued fraction.
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InputError("gamma shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double chi2_cdf(double x, double df) {
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi2_quantile(double prob, double df) {
  if (!(df > 0.0)) throw InputError("chi-square degrees of freedom must be positive");
  if (!(prob >= 0.0 && prob < 1.0)) {
    throw InputError("chi-square quantile probability must be in [0, 1)");
  }
  if (prob == 0.0) return 0.0;

  double lo = 0.0;
  double hi = std::max(1.0, df);
  while (chi2_cdf(hi, df) < prob) {
    lo = hi;
    hi *= 2.0;
  }
  const double a = 0.5 * df;
  const double log_norm = -a * std::log(2.0) - std::lgamma(a);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = chi2_cdf(x, df) - prob;
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    const double log_pdf = log_norm + (a - 1.0) * std::log(x) - 0.5 * x;
    const double pdf = std::exp(log_pdf);
    double next = x - f / pdf;
    if (!(pdf > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, x)) return next;
    x = next;
  }
  return x;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw InputError("normal quantile probability must be in (0, 1)");
  }
  if (prob == 0.5) return 0.0;
  const double z = std::sqrt(chi2_quantile(std::abs(2.0 * prob - 1.0), 1.0));
  return prob > 0.5 ? z : -z;
}

}  // namespace fasthcs::stats
