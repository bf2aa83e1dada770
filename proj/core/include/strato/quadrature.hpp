#pragma once

#include <functional>
#include <vector>

namespace strato::quad {

struct QuadResult {
  double value;
  double error;     // estimated absolute error
  int evaluations;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Throws std::runtime_error if the tolerance is not met within the
/// subdivision budget.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& options = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

}  // namespace strato::quad
