#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace strato::fit {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RatePoint {
  double mu_t;
  double error;
};

struct FitOptions {
  int min_points = 6;
  double min_decades = 2.0;
};

struct FitResult {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;  // log(error) at mu_t = 1
  double c1 = 0.0;         // min error / mu_t^theoretical
  double c2 = 0.0;         // max error / mu_t^theoretical
  double theoretical = 0.0;
};

/// Least-squares slope of log(error) against log(mu_t), with sandwich
/// constants against the theoretical exponent. Throws FitError when the
/// series is too short, spans too few decades, or holds non-positive values.
FitResult fit_exponent(const std::vector<RatePoint>& points, double theoretical, const FitOptions& options = {});

/// Sandwich constants only, over an arbitrary set of points.
std::pair<double, double> sandwich(const std::vector<RatePoint>& points, double exponent);

}  // namespace strato::fit
