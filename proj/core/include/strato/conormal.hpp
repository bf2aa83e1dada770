#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "strato/field.hpp"
#include "strato/initdata.hpp"
#include "strato/littlewood_paley.hpp"
#include "strato/solver.hpp"

namespace strato::conormal {

class ConormalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Admissible family X_lambda together with separately transported
/// divergences.
struct VectorFieldFamily {
  std::vector<VectorField> members;
  std::vector<ScalarField> divergence;
  double t = 0.0;
};

VectorFieldFamily make_family(std::vector<VectorField> members, double t = 0.0);
VectorFieldFamily make_family(const init::InitialFamily& initial);

double index(const VectorFieldFamily& family);

/// One RK4 step of d_t X + v . grad X = X . grad v (and d_t div X + v . grad div X = 0)
/// using the stage velocities of a solver step. Throws ConormalError on
/// non-finite output.
VectorFieldFamily advect_family(const VectorFieldFamily& family, const solver::StepRecord& record);

/// div(u X) - u div X with dealiased products.
ScalarField directional_derivative(const ScalarField& u, const VectorField& x);

/// max over components of the C^eps norm of X plus the C^eps norm of div X.
double member_norm(const VectorField& x, const ScalarField& divergence, double epsilon,
                   const lp::DyadicPartition& partition);

/// Anisotropic Hoelder norm
/// (|u|_inf sup_l (|X_l|_{C^eps} + |div X_l|_{C^eps}) + sup_l |d_{X_l} u|_{C^{eps-1}}) / I(X).
double conormal_norm(const ScalarField& u, const VectorFieldFamily& family, double epsilon,
                     const lp::DyadicPartition& partition);

/// |grad v|_inf / (|omega|_2 + |omega|_inf log(e + |omega|_{C^eps(X)} / |omega|_inf)).
double log_estimate_ratio(const ScalarField& omega, const VectorFieldFamily& family, double epsilon,
                          const lp::DyadicPartition& partition);

/// Point evaluation of a velocity spectrum pair at off-grid points.
class VelocitySampler {
 public:
  enum class Method { spectral, bicubic };

  VelocitySampler(const std::array<Spectrum, 2>& velocity, Method method);
  std::array<double, 2> operator()(double x1, double x2) const;

 private:
  double bicubic(const std::vector<double>& values, double x1, double x2) const;

  std::array<Spectrum, 2> spectra_;
  std::vector<int> rows_;  // rows holding nonzero coefficients
  int cols_ = 0;
  Method method_;
  GridSpec grid_;
  std::vector<double> v1_, v2_;  // physical samples for the bicubic path
};

struct FlowBoundary {
  std::vector<std::array<double, 2>> points;
  init::BoundaryCurve reference;
  double t = 0.0;
};

FlowBoundary make_flow_boundary(const init::BoundaryCurve& curve);

/// RK4 tracer step with the solver's stage velocities; spectral evaluation
/// for at most `spectral_limit` tracers, bicubic above. Throws ConormalError
/// when the adjacent-spacing ratio exceeds `spacing_limit`.
FlowBoundary advect_boundary(const FlowBoundary& boundary, const solver::StepRecord& record,
                             int spectral_limit = 512, double spacing_limit = 4.0);

/// Shoelace area of the closed polygon.
double enclosed_area(const std::vector<std::array<double, 2>>& points);

/// max adjacent spacing / min adjacent spacing.
double spacing_ratio(const std::vector<std::array<double, 2>>& points);

/// Spectral derivative d gamma / d sigma for uniformly spaced sigma in [0, 2 pi).
std::vector<std::array<double, 2>> curve_tangents(const std::vector<std::array<double, 2>>& points);

/// max over pairs of |gamma'(s) - gamma'(s')| / |s - s'|^eps (periodic distance).
double holder_quotient(const std::vector<std::array<double, 2>>& points, double epsilon);

/// max over tracers of |X x gamma'| / (|X| |gamma'|) for the family member `x`.
double tangency_residual(const std::vector<std::array<double, 2>>& points, const VectorField& x);

}  // namespace strato::conormal
