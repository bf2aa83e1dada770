#include "strato/fit.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace strato::fit {

std::pair<double, double> sandwich(const std::vector<RatePoint>& points, double exponent) {
  if (points.empty()) throw FitError("sandwich: no points");
  double lo = HUGE_VAL, hi = 0.0;
  for (const auto& pt : points) {
    if (!(pt.mu_t > 0.0) || !(pt.error > 0.0)) throw FitError("sandwich: values must be positive");
    const double c = pt.error / std::pow(pt.mu_t, exponent);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return {lo, hi};
}

FitResult fit_exponent(const std::vector<RatePoint>& points, double theoretical, const FitOptions& options) {
  const int n = static_cast<int>(points.size());
  if (n < std::max(2, options.min_points)) {
    throw FitError("fit_exponent: " + std::to_string(n) + " points, need " + std::to_string(options.min_points));
  }
  double xmin = HUGE_VAL, xmax = -HUGE_VAL;
  for (const auto& pt : points) {
    if (!(pt.mu_t > 0.0) || !(pt.error > 0.0) || !std::isfinite(pt.error)) {
      throw FitError("fit_exponent: mu_t and error must be positive and finite");
    }
    xmin = std::min(xmin, std::log10(pt.mu_t));
    xmax = std::max(xmax, std::log10(pt.mu_t));
  }
  if (xmax - xmin < options.min_decades - 1e-9) {
    throw FitError("fit_exponent: mu_t spans " + std::to_string(xmax - xmin) + " decades, need " +
                   std::to_string(options.min_decades));
  }
  double sx = 0.0, sy = 0.0;
  for (const auto& pt : points) {
    sx += std::log(pt.mu_t);
    sy += std::log(pt.error);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& pt : points) {
    const double dx = std::log(pt.mu_t) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(pt.error) - my);
  }
  FitResult out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double rss = 0.0;
  for (const auto& pt : points) {
    const double res = std::log(pt.error) - (out.intercept + out.slope * std::log(pt.mu_t));
    rss += res * res;
  }
  out.stderr_slope = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  out.theoretical = theoretical;
  std::tie(out.c1, out.c2) = sandwich(points, theoretical);
  return out;
}

}  // namespace strato::fit
