#include "strato/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "strato/littlewood_paley.hpp"
#include "strato/quadrature.hpp"
#include "strato/spectral.hpp"

namespace strato::init {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const quad::QuadOptions kCurveQuad{1e-13, 1e-13, 20000};

void check_margin(const GridSpec& grid, const std::array<double, 2>& center, double extent, const char* what) {
  const double limit = 0.75 * grid.half_length();
  for (double c : center) {
    if (std::abs(c) + extent > limit) {
      throw InitError(std::string(what) + ": support reaches within L/4 of the box edge");
    }
  }
}

}  // namespace

PatchKind parse_patch_kind(const std::string& name) {
  if (name == "disc") return PatchKind::disc;
  if (name == "ellipse") return PatchKind::ellipse;
  if (name == "star") return PatchKind::star;
  throw InitError("unknown patch kind '" + name + "'");
}

std::string to_string(PatchKind kind) {
  switch (kind) {
    case PatchKind::disc: return "disc";
    case PatchKind::ellipse: return "ellipse";
    case PatchKind::star: return "star";
  }
  return "?";
}

DensityKind parse_density_kind(const std::string& name) {
  if (name == "constant") return DensityKind::constant;
  if (name == "gaussian") return DensityKind::gaussian;
  if (name == "compact_bump" || name == "compact-bump") return DensityKind::compact_bump;
  throw InitError("unknown density kind '" + name + "'");
}

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::constant: return "constant";
    case DensityKind::gaussian: return "gaussian";
    case DensityKind::compact_bump: return "compact_bump";
  }
  return "?";
}

// ------------------------------------------------------------------ patches

void PatchSpec::validate() const {
  switch (kind) {
    case PatchKind::disc:
      if (!(radius > 0.0)) throw InitError("disc: radius must be positive");
      break;
    case PatchKind::ellipse:
      if (!(semi_axis_1 > 0.0) || !(semi_axis_2 > 0.0)) throw InitError("ellipse: semi-axes must be positive");
      break;
    case PatchKind::star: {
      if (!(radius > 0.0)) throw InitError("star: radius must be positive");
      if (mode < 1 || octaves < 1) throw InitError("star: mode and octaves must be >= 1");
      if (!(epsilon > 0.0 && epsilon < 1.0)) throw InitError("star: epsilon must lie in (0, 1)");
      double sum = 0.0;
      for (int j = 0; j < octaves; ++j) sum += std::exp2(-j * (1.0 + epsilon));
      if (!(std::abs(amplitude) * sum < 1.0)) throw InitError("star: amplitude too large, R(theta) must stay positive");
      break;
    }
  }
}

double PatchSpec::boundary_radius(double theta) const {
  switch (kind) {
    case PatchKind::disc: return radius;
    case PatchKind::ellipse: {
      const double c = std::cos(theta) / semi_axis_1, s = std::sin(theta) / semi_axis_2;
      return 1.0 / std::sqrt(c * c + s * s);
    }
    case PatchKind::star: {
      double sum = 0.0;
      for (int j = 0; j < octaves; ++j) sum += std::exp2(-j * (1.0 + epsilon)) * std::cos(std::exp2(j) * mode * theta);
      return radius * (1.0 + amplitude * sum);
    }
  }
  return radius;
}

double PatchSpec::boundary_radius_derivative(double theta) const {
  switch (kind) {
    case PatchKind::disc: return 0.0;
    case PatchKind::ellipse: {
      const double r = boundary_radius(theta);
      const double k = 1.0 / (semi_axis_2 * semi_axis_2) - 1.0 / (semi_axis_1 * semi_axis_1);
      return -r * r * r * std::sin(theta) * std::cos(theta) * k;
    }
    case PatchKind::star: {
      double sum = 0.0;
      for (int j = 0; j < octaves; ++j) {
        const double freq = std::exp2(j) * mode;
        sum += std::exp2(-j * (1.0 + epsilon)) * freq * std::sin(freq * theta);
      }
      return -radius * amplitude * sum;
    }
  }
  return 0.0;
}

double PatchSpec::max_radius() const {
  switch (kind) {
    case PatchKind::disc: return radius;
    case PatchKind::ellipse: return std::max(semi_axis_1, semi_axis_2);
    case PatchKind::star: {
      double sum = 0.0;
      for (int j = 0; j < octaves; ++j) sum += std::exp2(-j * (1.0 + epsilon));
      return radius * (1.0 + std::abs(amplitude) * sum);
    }
  }
  return radius;
}

double PatchSpec::scale() const {
  return kind == PatchKind::ellipse ? std::min(semi_axis_1, semi_axis_2) : radius;
}

bool PatchSpec::contains(double x1, double x2) const {
  const double dx = x1 - center[0], dy = x2 - center[1];
  const double r = std::hypot(dx, dy);
  if (r == 0.0) return true;
  return r < boundary_radius(std::atan2(dy, dx));
}

ScalarField rasterize_patch(const PatchSpec& spec, const GridSpec& grid, int supersample) {
  spec.validate();
  if (supersample < 1) throw InitError("rasterize_patch: supersample must be >= 1");
  check_margin(grid, spec.center, spec.max_radius(), "rasterize_patch");

  double slope = 0.0;
  for (int k = 0; k < 4096; ++k) slope = std::max(slope, std::abs(spec.boundary_radius_derivative(kTwoPi * k / 4096)));
  const double dx = grid.dx();
  const int n = grid.n();
  std::vector<double> v(grid.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x1 = grid.coord(i), x2 = grid.coord(j);
      const double rx = x1 - spec.center[0], ry = x2 - spec.center[1];
      const double r = std::hypot(rx, ry);
      const double d = r - spec.boundary_radius(std::atan2(ry, rx));
      const double band = 1.5 * dx * (1.0 + slope / std::max(r, dx));
      double value;
      if (d < -band) {
        value = 1.0;
      } else if (d > band) {
        value = 0.0;
      } else {
        int inside = 0;
        for (int a = 0; a < supersample; ++a) {
          const double sx = x1 + ((a + 0.5) / supersample - 0.5) * dx;
          for (int b = 0; b < supersample; ++b) {
            const double sy = x2 + ((b + 0.5) / supersample - 0.5) * dx;
            inside += spec.contains(sx, sy) ? 1 : 0;
          }
        }
        value = static_cast<double>(inside) / (supersample * supersample);
      }
      v[static_cast<std::size_t>(i) * n + j] = value;
    }
  }
  return ScalarField(grid, std::move(v));
}

double patch_area(const PatchSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case PatchKind::disc: return std::numbers::pi * spec.radius * spec.radius;
    case PatchKind::ellipse: return std::numbers::pi * spec.semi_axis_1 * spec.semi_axis_2;
    case PatchKind::star: {
      auto f = [&](double t) {
        const double r = spec.boundary_radius(t);
        return 0.5 * r * r;
      };
      return quad::integrate(f, 0.0, kTwoPi, kCurveQuad).value;
    }
  }
  return 0.0;
}

double patch_perimeter(const PatchSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case PatchKind::disc: return kTwoPi * spec.radius;
    case PatchKind::ellipse: {
      const double a = spec.semi_axis_1, b = spec.semi_axis_2;
      auto f = [a, b](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); };
      return quad::integrate(f, 0.0, kTwoPi, kCurveQuad).value;
    }
    case PatchKind::star: {
      auto f = [&](double t) { return std::hypot(spec.boundary_radius(t), spec.boundary_radius_derivative(t)); };
      return quad::integrate(f, 0.0, kTwoPi, kCurveQuad).value;
    }
  }
  return 0.0;
}

double bv_norm(const PatchSpec& spec) { return patch_area(spec) + patch_perimeter(spec); }

BoundaryCurve boundary_curve(const PatchSpec& spec, int samples) {
  spec.validate();
  if (samples < 8) throw InitError("boundary_curve: need at least 8 samples");
  BoundaryCurve curve;
  for (int k = 0; k < samples; ++k) {
    const double t = kTwoPi * k / samples;
    const double r = spec.boundary_radius(t), dr = spec.boundary_radius_derivative(t);
    const double c = std::cos(t), s = std::sin(t);
    curve.sigma.push_back(t);
    curve.points.push_back({spec.center[0] + r * c, spec.center[1] + r * s});
    curve.tangents.push_back({dr * c - r * s, dr * s + r * c});
  }
  return curve;
}

// ----------------------------------------------------------------- density

double DensitySpec::profile(double x1, double x2) const {
  const double dx = x1 - center[0], dy = x2 - center[1];
  const double r2 = dx * dx + dy * dy;
  switch (kind) {
    case DensityKind::constant: return amplitude;
    case DensityKind::gaussian: return amplitude * std::exp(-r2 / (2.0 * width * width));
    case DensityKind::compact_bump: {
      const double u = r2 / (width * width);
      return u < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0;
    }
  }
  return 0.0;
}

double DensitySpec::support_radius() const {
  switch (kind) {
    case DensityKind::constant: return 0.0;
    case DensityKind::gaussian: return 5.0 * width;
    case DensityKind::compact_bump: return width;
  }
  return 0.0;
}

Density make_density(const DensitySpec& spec, const GridSpec& grid) {
  if (spec.kind != DensityKind::constant) {
    if (!(spec.width > 0.0)) throw InitError("make_density: width must be positive");
    check_margin(grid, spec.center, spec.support_radius(), "make_density");
  }
  ScalarField rho = ScalarField::sample(grid, [&](double x1, double x2) { return spec.profile(x1, x2); });
  const double l1 = spectral::lp_norm(rho, 1.0);
  const double linf = rho.max_abs();
  return {std::move(rho), l1, linf};
}

double density_l1_exact(const DensitySpec& spec, const GridSpec& grid) {
  const double a = std::abs(spec.amplitude);
  switch (spec.kind) {
    case DensityKind::constant: return a * grid.box_area();
    case DensityKind::gaussian: return a * kTwoPi * spec.width * spec.width;
    case DensityKind::compact_bump: {
      const double w = spec.width;
      auto f = [w](double r) {
        const double u = (r * r) / (w * w);
        return u < 1.0 ? r * std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0;
      };
      return a * kTwoPi * quad::integrate(f, 0.0, w, {1e-15, 1e-14, 4000}).value;
    }
  }
  return 0.0;
}

// ------------------------------------------------------------ vector family

double family_index(const std::vector<VectorField>& members) {
  if (members.empty()) throw InitError("family_index: empty family");
  const std::size_t size = members.front().grid().size();
  double best = HUGE_VAL;
  for (std::size_t k = 0; k < size; ++k) {
    double m = 0.0;
    for (const auto& x : members) m = std::max(m, std::hypot(x.u1.values()[k], x.u2.values()[k]));
    best = std::min(best, m);
  }
  return best;
}

InitialFamily initial_vector_family(const PatchSpec& spec, const GridSpec& grid, int boundary_samples) {
  spec.validate();
  check_margin(grid, spec.center, spec.max_radius() + 0.6 * spec.scale(), "initial_vector_family");
  const double s = spec.scale();
  auto signed_gap = [&](double x1, double x2) {
    const double rx = x1 - spec.center[0], ry = x2 - spec.center[1];
    return std::hypot(rx, ry) - spec.boundary_radius(std::atan2(ry, rx));
  };
  auto raw_level = [&](double x1, double x2) {
    const double rx = x1 - spec.center[0], ry = x2 - spec.center[1];
    switch (spec.kind) {
      case PatchKind::disc: return 0.5 * (rx * rx + ry * ry - spec.radius * spec.radius);
      case PatchKind::ellipse: {
        const double u = rx / spec.semi_axis_1, w = ry / spec.semi_axis_2;
        return 0.5 * (u * u + w * w - 1.0);
      }
      case PatchKind::star: return signed_gap(x1, x2);
    }
    return 0.0;
  };

  // Annular cutoff: 1 for |d| <= 0.3 s, 0 for |d| >= 0.6 s.
  ScalarField level = ScalarField::sample(grid, [&](double x1, double x2) {
    return lp::chi_profile(std::abs(signed_gap(x1, x2)) / (0.6 * s)) * raw_level(x1, x2);
  });
  if (spec.kind == PatchKind::star) {
    const double width = 2.0 * grid.dx();
    level = spectral::heat_propagate(level, 0.5 * width * width);
  }
  ScalarField tube = ScalarField::sample(
      grid, [&](double x1, double x2) { return lp::chi_profile(std::abs(signed_gap(x1, x2)) / (0.2 * s)); });

  VectorField tangent = spectral::perp_gradient(level);
  VectorField transverse{ScalarField::constant(grid, 1.0) - tube, ScalarField::zeros(grid)};
  const double index = family_index({tangent, transverse});

  const auto curve = boundary_curve(spec, boundary_samples);
  const Spectrum& lh = level.spectrum();
  const Spectrum g1 = spectral::apply_multiplier(lh, [](const spectral::Mode& m) { return Complex(0.0, m.k1_odd); });
  const Spectrum g2 = spectral::apply_multiplier(lh, [](const spectral::Mode& m) { return Complex(0.0, m.k2_odd); });
  double tangency = 0.0, alignment = 0.0;
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    const auto [x1, x2] = curve.points[k];
    const double f1 = spectral::evaluate(g1, x1, x2), f2 = spectral::evaluate(g2, x1, x2);
    const double xa = -f2, xb = f1;
    const double xn = std::hypot(xa, xb), gn = std::hypot(f1, f2);
    const auto [t1, t2] = curve.tangents[k];
    if (xn > 0.0) {
      tangency = std::max(tangency, std::abs(xa * f1 + xb * f2) / (xn * gn));
      alignment = std::max(alignment, std::abs(xa * t2 - xb * t1) / (xn * std::hypot(t1, t2)));
    } else {
      tangency = alignment = 1.0;
    }
  }
  if (index < 1e-3) throw InitError("initial_vector_family: index below 1e-3, tube width misconfigured");
  return {std::move(tangent), std::move(transverse), std::move(level), std::move(tube), index, tangency, alignment};
}

}  // namespace strato::init
