#pragma once

// Test-only reference computations. None of these call into the library
// code path they are used to check.

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

/// (1 / 4 xi) |integral_{-xi}^{xi} dtau / (1 + i tau)|^2 by adaptive
/// Gauss-Kronrod on the real and imaginary parts separately.
inline double focusing_factor_quadrature(double xi) {
  using boost::math::quadrature::gauss_kronrod;
  const auto re = [](double t) { return 1.0 / (1.0 + t * t); };
  const auto im = [](double t) { return -t / (1.0 + t * t); };
  const double a = gauss_kronrod<double, 61>::integrate(re, -xi, xi, 15, 1e-11);
  const double b = gauss_kronrod<double, 61>::integrate(im, -xi, xi, 15, 1e-11);
  return std::norm(std::complex<double>(a, b)) / (4.0 * xi);
}

/// Root of 2 xi / (1 + xi^2) = arctan(xi), the stationarity condition of
/// arctan(xi)^2 / xi, by bisection.
inline double focusing_optimum_root() {
  const auto g = [](double x) { return 2.0 * x / (1.0 + x * x) - std::atan(x); };
  const auto r = boost::math::tools::bisect(g, 0.5, 3.0,
                                            boost::math::tools::eps_tolerance<double>(50));
  return 0.5 * (r.first + r.second);
}

/// Half-maximum width of a unit rectangle of width `w` convolved with a
/// Gaussian of standard deviation `sigma`, found on a dense numeric grid.
inline double rect_gauss_fwhm(double w, double sigma) {
  const auto profile = [&](double t) {
    const double s = sigma * std::numbers::sqrt2;
    return 0.5 * (std::erf((t + 0.5 * w) / s) - std::erf((t - 0.5 * w) / s));
  };
  const double peak = profile(0.0);
  double lo = 0.0, hi = 0.5 * w + 10.0 * sigma;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (profile(mid) > 0.5 * peak ? lo : hi) = mid;
  }
  return 2.0 * lo;
}

/// Kolmogorov-Smirnov statistic of samples against Exp(rate).
inline double ks_exponential(std::vector<double> x, double rate) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = 1.0 - std::exp(-rate * x[i]);
    d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
  }
  return d;
}

/// Asymptotic two-sided KS critical value at significance 0.01.
inline double ks_critical_001(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

/// Brute-force grid maximum of f on (0, hi] with n points.
template <typename F>
std::pair<double, double> grid_maximum(F f, double hi, int n) {
  double best_x = 0.0, best = -1.0;
  for (int i = 1; i <= n; ++i) {
    const double x = hi * i / n;
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

/// FWHM of a binned peak: plateau height from bins above 75% of the max,
/// then linear interpolation of the half-height crossings on each flank.
inline double histogram_fwhm(const std::vector<double>& centers, const std::vector<double>& counts) {
  const double max = *std::max_element(counts.begin(), counts.end());
  double sum = 0.0;
  int n = 0;
  for (double c : counts) {
    if (c >= 0.75 * max) {
      sum += c;
      ++n;
    }
  }
  const double half = 0.5 * sum / n;
  std::size_t first = 0;
  while (counts[first] < half) ++first;
  std::size_t last = counts.size() - 1;
  while (counts[last] < half) --last;
  const auto cross = [&](std::size_t a, std::size_t b) {
    const double t = (half - counts[a]) / (counts[b] - counts[a]);
    return centers[a] + t * (centers[b] - centers[a]);
  };
  const double left = first > 0 ? cross(first - 1, first) : centers[first];
  const double right = last + 1 < counts.size() ? cross(last + 1, last) : centers[last];
  return right - left;
}

}  // namespace oracle
