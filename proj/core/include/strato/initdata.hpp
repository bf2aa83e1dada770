#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "strato/field.hpp"

namespace strato::init {

class InitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class PatchKind { disc, ellipse, star };

PatchKind parse_patch_kind(const std::string& name);
std::string to_string(PatchKind kind);

/// Star-shaped patch about `center`. The boundary is |x - c| = R(theta):
///  disc    R = radius
///  ellipse the curve (x/a)^2 + (y/b)^2 = 1 with a = semi_axis_1, b = semi_axis_2
///  star    R = radius (1 + amplitude sum_{j < octaves} 2^{-j(1+eps)} cos(2^j mode theta))
struct PatchSpec {
  PatchKind kind = PatchKind::disc;
  std::array<double, 2> center{0.0, 0.0};
  double radius = 1.0;
  double semi_axis_1 = 1.0;
  double semi_axis_2 = 1.0;
  double amplitude = 0.0;
  int mode = 5;
  int octaves = 1;
  double epsilon = 0.5;

  /// Throws InitError on non-positive radii or a non-simple star.
  void validate() const;
  double boundary_radius(double theta) const;
  double boundary_radius_derivative(double theta) const;
  /// Largest R(theta).
  double max_radius() const;
  /// Length scale used for tube widths: radius, or the smaller ellipse axis.
  double scale() const;
  bool contains(double x1, double x2) const;
};

enum class DensityKind { constant, gaussian, compact_bump };

DensityKind parse_density_kind(const std::string& name);
std::string to_string(DensityKind kind);

/// constant     rho = amplitude everywhere
/// gaussian     amplitude exp(-|x - c|^2 / (2 width^2)), treated as supported within 5 width
/// compact_bump amplitude exp(1 - 1/(1 - |x - c|^2/width^2)) for |x - c| < width
struct DensitySpec {
  DensityKind kind = DensityKind::constant;
  double amplitude = 0.0;
  double width = 1.0;
  std::array<double, 2> center{0.0, 0.0};

  double profile(double x1, double x2) const;
  double support_radius() const;
};

struct Density {
  ScalarField rho;
  double l1_norm;
  double linf_norm;
};

/// Area-fraction raster: each cell value is the share of supersample^2
/// subsamples that fall inside the patch. Throws InitError when the patch
/// comes closer than L/4 to the box edge.
ScalarField rasterize_patch(const PatchSpec& spec, const GridSpec& grid, int supersample = 8);

double patch_area(const PatchSpec& spec);
double patch_perimeter(const PatchSpec& spec);
/// Total variation of the indicator plus its L^1 norm: area + perimeter.
double bv_norm(const PatchSpec& spec);

/// Throws InitError when the density support leaves the L/4 margin.
Density make_density(const DensitySpec& spec, const GridSpec& grid);

/// Exact L^1 norm of the density profile on the plane (constant: on the box).
double density_l1_exact(const DensitySpec& spec, const GridSpec& grid);

struct BoundaryCurve {
  std::vector<double> sigma;  // uniform in [0, 2 pi)
  std::vector<std::array<double, 2>> points;
  std::vector<std::array<double, 2>> tangents;  // d gamma / d sigma
};

BoundaryCurve boundary_curve(const PatchSpec& spec, int samples);

/// The initial admissible pair: a tangent field grad^perp f0 and the
/// transverse field (1 - chi) e1, with chi = 1 on a thin tube around the
/// boundary.
struct InitialFamily {
  VectorField tangent;
  VectorField transverse;
  ScalarField level_set;  // f0 with the annular cutoff applied
  ScalarField tube;       // chi
  double index;           // inf_x max(|X_00|, |X_01|)
  double tangency_residual;  // max |X_00 . grad f0| / (|X_00| |grad f0|) on the boundary
  double alignment_residual;  // max |X_00 x gamma'| / (|X_00| |gamma'|) on the boundary
};

/// Throws InitError when the index falls below 1e-3.
InitialFamily initial_vector_family(const PatchSpec& spec, const GridSpec& grid, int boundary_samples = 256);

/// inf_x max_lambda |X_lambda(x)| over grid nodes.
double family_index(const std::vector<VectorField>& members);

}  // namespace strato::init
