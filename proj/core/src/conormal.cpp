#include "strato/conormal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "strato/fft.hpp"
#include "strato/spectral.hpp"

namespace strato::conormal {
namespace {

constexpr Complex kI{0.0, 1.0};

struct Gradient {
  std::vector<double> d1, d2;
};

// Physical samples of a (truncated) spectrum and of its gradient.
struct Sampled {
  std::vector<double> value;
  Gradient grad;
};

Sampled sample_truncated(Spectrum s) {
  spectral::truncate_two_thirds(s);
  Sampled out;
  out.value = fft::inverse(s);
  out.grad.d1 = fft::inverse(spectral::apply_multiplier(s, [](const spectral::Mode& m) { return kI * m.k1_odd; }));
  out.grad.d2 = fft::inverse(spectral::apply_multiplier(s, [](const spectral::Mode& m) { return kI * m.k2_odd; }));
  return out;
}

ScalarField project(const GridSpec& grid, const std::vector<double>& values) {
  Spectrum s = fft::forward(grid, values);
  spectral::truncate_two_thirds(s);
  return ScalarField::from_spectrum(s);
}

struct FamilyRates {
  std::vector<VectorField> members;
  std::vector<ScalarField> divergence;
};

FamilyRates rates(const std::vector<VectorField>& members, const std::vector<ScalarField>& divergence,
                  const std::array<Spectrum, 2>& velocity) {
  const GridSpec& grid = velocity[0].grid();
  const Sampled v1 = sample_truncated(velocity[0]);
  const Sampled v2 = sample_truncated(velocity[1]);
  const std::size_t size = grid.size();
  FamilyRates out;
  for (const auto& x : members) {
    const Sampled x1 = sample_truncated(x.u1.spectrum());
    const Sampled x2 = sample_truncated(x.u2.spectrum());
    std::vector<double> f1(size), f2(size);
    for (std::size_t k = 0; k < size; ++k) {
      const double a = v1.value[k], b = v2.value[k];
      f1[k] = -(a * x1.grad.d1[k] + b * x1.grad.d2[k]) + x1.value[k] * v1.grad.d1[k] + x2.value[k] * v1.grad.d2[k];
      f2[k] = -(a * x2.grad.d1[k] + b * x2.grad.d2[k]) + x1.value[k] * v2.grad.d1[k] + x2.value[k] * v2.grad.d2[k];
    }
    out.members.push_back({project(grid, f1), project(grid, f2)});
  }
  for (const auto& d : divergence) {
    const Sampled ds = sample_truncated(d.spectrum());
    std::vector<double> g(size);
    for (std::size_t k = 0; k < size; ++k) g[k] = -(v1.value[k] * ds.grad.d1[k] + v2.value[k] * ds.grad.d2[k]);
    out.divergence.push_back(project(grid, g));
  }
  return out;
}

VectorFieldFamily axpy(const VectorFieldFamily& base, double c, const FamilyRates& r) {
  VectorFieldFamily out;
  out.t = base.t;
  for (std::size_t l = 0; l < base.members.size(); ++l) out.members.push_back(base.members[l] + c * r.members[l]);
  for (std::size_t l = 0; l < base.divergence.size(); ++l) {
    out.divergence.push_back(base.divergence[l] + c * r.divergence[l]);
  }
  return out;
}

double periodic_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

}  // namespace

VectorFieldFamily make_family(std::vector<VectorField> members, double t) {
  if (members.empty()) throw ConormalError("make_family: empty family");
  VectorFieldFamily family;
  family.t = t;
  for (const auto& x : members) family.divergence.push_back(spectral::divergence(x));
  family.members = std::move(members);
  return family;
}

VectorFieldFamily make_family(const init::InitialFamily& initial) {
  return make_family({initial.tangent, initial.transverse}, 0.0);
}

double index(const VectorFieldFamily& family) { return init::family_index(family.members); }

VectorFieldFamily advect_family(const VectorFieldFamily& family, const solver::StepRecord& record) {
  const double h = record.h;
  const FamilyRates k1 = rates(family.members, family.divergence, record.velocity[0]);
  const VectorFieldFamily s2 = axpy(family, 0.5 * h, k1);
  const FamilyRates k2 = rates(s2.members, s2.divergence, record.velocity[1]);
  const VectorFieldFamily s3 = axpy(family, 0.5 * h, k2);
  const FamilyRates k3 = rates(s3.members, s3.divergence, record.velocity[2]);
  const VectorFieldFamily s4 = axpy(family, h, k3);
  const FamilyRates k4 = rates(s4.members, s4.divergence, record.velocity[3]);

  VectorFieldFamily out;
  out.t = family.t + h;
  const double c = h / 6.0;
  for (std::size_t l = 0; l < family.members.size(); ++l) {
    out.members.push_back(family.members[l] +
                          c * (k1.members[l] + 2.0 * k2.members[l] + 2.0 * k3.members[l] + k4.members[l]));
    if (!out.members.back().u1.all_finite() || !out.members.back().u2.all_finite()) {
      throw ConormalError("advect_family: non-finite member at t = " + std::to_string(out.t));
    }
  }
  for (std::size_t l = 0; l < family.divergence.size(); ++l) {
    out.divergence.push_back(family.divergence[l] + c * (k1.divergence[l] + 2.0 * k2.divergence[l] +
                                                         2.0 * k3.divergence[l] + k4.divergence[l]));
  }
  return out;
}

ScalarField directional_derivative(const ScalarField& u, const VectorField& x) {
  const VectorField ux{spectral::product(u, x.u1), spectral::product(u, x.u2)};
  return spectral::divergence(ux) - spectral::product(u, spectral::divergence(x));
}

double member_norm(const VectorField& x, const ScalarField& divergence, double epsilon,
                   const lp::DyadicPartition& partition) {
  return std::max(lp::holder_norm(x.u1, epsilon, partition), lp::holder_norm(x.u2, epsilon, partition)) +
         lp::holder_norm(divergence, epsilon, partition);
}

double conormal_norm(const ScalarField& u, const VectorFieldFamily& family, double epsilon,
                     const lp::DyadicPartition& partition) {
  const double idx = index(family);
  if (!(idx > 1e-12)) throw ConormalError("conormal_norm: degenerate family (index ~ 0)");
  double size = 0.0, along = 0.0;
  for (std::size_t l = 0; l < family.members.size(); ++l) {
    size = std::max(size, member_norm(family.members[l], family.divergence[l], epsilon, partition));
    along = std::max(along,
                     lp::holder_norm(directional_derivative(u, family.members[l]), epsilon - 1.0, partition));
  }
  return (u.max_abs() * size + along) / idx;
}

double log_estimate_ratio(const ScalarField& omega, const VectorFieldFamily& family, double epsilon,
                          const lp::DyadicPartition& partition) {
  const double sup = omega.max_abs();
  if (!(sup > 0.0)) throw ConormalError("log_estimate_ratio: zero vorticity");
  const double grad_v = spectral::velocity_gradient_sup(spectral::biot_savart(omega));
  const double cn = conormal_norm(omega, family, epsilon, partition);
  return grad_v / (spectral::lp_norm(omega, 2.0) + sup * std::log(std::numbers::e + cn / sup));
}

// ------------------------------------------------------------------ sampler

VelocitySampler::VelocitySampler(const std::array<Spectrum, 2>& velocity, Method method)
    : spectra_(velocity), method_(method), grid_(velocity[0].grid()) {
  require_same_grid(velocity[0].grid(), velocity[1].grid(), "VelocitySampler");
  if (method_ == Method::bicubic) {
    v1_ = fft::inverse(spectra_[0]);
    v2_ = fft::inverse(spectra_[1]);
    return;
  }
  for (int i = 0; i < grid_.n(); ++i) {
    bool any = false;
    for (int j = 0; j < grid_.spectral_columns(); ++j) {
      if (spectra_[0](i, j) != Complex{} || spectra_[1](i, j) != Complex{}) {
        any = true;
        cols_ = std::max(cols_, j + 1);
      }
    }
    if (any) rows_.push_back(i);
  }
}

std::array<double, 2> VelocitySampler::operator()(double x1, double x2) const {
  if (method_ == Method::bicubic) return {bicubic(v1_, x1, x2), bicubic(v2_, x1, x2)};
  const double y1 = x1 + grid_.half_length();
  const double y2 = x2 + grid_.half_length();
  std::vector<Complex> e2(cols_);
  const Complex step2 = std::polar(1.0, grid_.fundamental() * y2);
  Complex e{1.0, 0.0};
  for (int j = 0; j < cols_; ++j) {
    e2[j] = e;
    e *= step2;
    if (j % 32 == 31) e = std::polar(1.0, (j + 1) * grid_.fundamental() * y2);
  }
  double a = 0.0, b = 0.0;
  for (int i : rows_) {
    Complex ra{}, rb{};
    for (int j = 0; j < cols_; ++j) {
      const double w = (j == 0 || j == grid_.n() / 2) ? 1.0 : 2.0;
      ra += w * spectra_[0](i, j) * e2[j];
      rb += w * spectra_[1](i, j) * e2[j];
    }
    const Complex e1 = std::polar(1.0, grid_.wavenumber(i) * y1);
    a += (ra * e1).real();
    b += (rb * e1).real();
  }
  return {a, b};
}

double VelocitySampler::bicubic(const std::vector<double>& values, double x1, double x2) const {
  const int n = grid_.n();
  const double dx = grid_.dx();
  const double s1 = (x1 + grid_.half_length()) / dx;
  const double s2 = (x2 + grid_.half_length()) / dx;
  const double f1 = std::floor(s1), f2 = std::floor(s2);
  const double t1 = s1 - f1, t2 = s2 - f2;
  // Catmull-Rom weights.
  auto weights = [](double t) {
    return std::array<double, 4>{0.5 * (-t + 2 * t * t - t * t * t), 0.5 * (2 - 5 * t * t + 3 * t * t * t),
                                 0.5 * (t + 4 * t * t - 3 * t * t * t), 0.5 * (-t * t + t * t * t)};
  };
  const auto w1 = weights(t1), w2 = weights(t2);
  const int i0 = static_cast<int>(f1), j0 = static_cast<int>(f2);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    const int i = ((i0 - 1 + a) % n + n) % n;
    double row = 0.0;
    for (int b = 0; b < 4; ++b) {
      const int j = ((j0 - 1 + b) % n + n) % n;
      row += w2[b] * values[static_cast<std::size_t>(i) * n + j];
    }
    acc += w1[a] * row;
  }
  return acc;
}

// ----------------------------------------------------------------- boundary

FlowBoundary make_flow_boundary(const init::BoundaryCurve& curve) { return {curve.points, curve, 0.0}; }

FlowBoundary advect_boundary(const FlowBoundary& boundary, const solver::StepRecord& record, int spectral_limit,
                             double spacing_limit) {
  const std::size_t m = boundary.points.size();
  if (m < 128) throw ConormalError("advect_boundary: need at least 128 tracers");
  const auto method = static_cast<int>(m) <= spectral_limit ? VelocitySampler::Method::spectral
                                                            : VelocitySampler::Method::bicubic;
  std::vector<VelocitySampler> stage;
  for (const auto& v : record.velocity) stage.emplace_back(v, method);
  const double h = record.h;
  FlowBoundary out = boundary;
  out.t = boundary.t + h;
  for (std::size_t k = 0; k < m; ++k) {
    const auto [x, y] = boundary.points[k];
    const auto k1 = stage[0](x, y);
    const auto k2 = stage[1](x + 0.5 * h * k1[0], y + 0.5 * h * k1[1]);
    const auto k3 = stage[2](x + 0.5 * h * k2[0], y + 0.5 * h * k2[1]);
    const auto k4 = stage[3](x + h * k3[0], y + h * k3[1]);
    out.points[k] = {x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                     y + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
  }
  const double ratio = spacing_ratio(out.points);
  if (!(ratio <= spacing_limit)) {
    throw ConormalError("advect_boundary: tracer spacing ratio " + std::to_string(ratio) + " exceeds limit");
  }
  return out;
}

double enclosed_area(const std::vector<std::array<double, 2>>& points) {
  double acc = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& a = points[k];
    const auto& b = points[(k + 1) % points.size()];
    acc += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * std::abs(acc);
}

double spacing_ratio(const std::vector<std::array<double, 2>>& points) {
  double lo = HUGE_VAL, hi = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& a = points[k];
    const auto& b = points[(k + 1) % points.size()];
    const double d = std::hypot(b[0] - a[0], b[1] - a[1]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return lo > 0.0 ? hi / lo : HUGE_VAL;
}

std::vector<std::array<double, 2>> curve_tangents(const std::vector<std::array<double, 2>>& points) {
  const int m = static_cast<int>(points.size());
  std::vector<Complex> twiddle(m);
  for (int k = 0; k < m; ++k) twiddle[k] = std::polar(1.0, -2.0 * std::numbers::pi * k / m);
  std::vector<Complex> cx(m), cy(m);
  for (int f = 0; f < m; ++f) {
    Complex ax{}, ay{};
    for (int k = 0; k < m; ++k) {
      const Complex w = twiddle[(static_cast<long>(f) * k) % m];
      ax += points[k][0] * w;
      ay += points[k][1] * w;
    }
    const int freq = f <= m / 2 ? f : f - m;
    const double factor = (2 * f == m) ? 0.0 : static_cast<double>(freq);
    cx[f] = kI * factor * ax / static_cast<double>(m);
    cy[f] = kI * factor * ay / static_cast<double>(m);
  }
  std::vector<std::array<double, 2>> out(m);
  for (int k = 0; k < m; ++k) {
    Complex sx{}, sy{};
    for (int f = 0; f < m; ++f) {
      const Complex w = std::conj(twiddle[(static_cast<long>(f) * k) % m]);
      sx += cx[f] * w;
      sy += cy[f] * w;
    }
    out[k] = {sx.real(), sy.real()};
  }
  return out;
}

double holder_quotient(const std::vector<std::array<double, 2>>& points, double epsilon) {
  const auto t = curve_tangents(points);
  const std::size_t m = points.size();
  const double ds = 2.0 * std::numbers::pi / static_cast<double>(m);
  double best = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const double gap = periodic_gap(a * ds, b * ds);
      const double diff = std::hypot(t[a][0] - t[b][0], t[a][1] - t[b][1]);
      best = std::max(best, diff / std::pow(gap, epsilon));
    }
  }
  return best;
}

double tangency_residual(const std::vector<std::array<double, 2>>& points, const VectorField& x) {
  const VelocitySampler sampler({x.u1.spectrum(), x.u2.spectrum()}, VelocitySampler::Method::spectral);
  const auto t = curve_tangents(points);
  double best = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto xv = sampler(points[k][0], points[k][1]);
    const double nx = std::hypot(xv[0], xv[1]), nt = std::hypot(t[k][0], t[k][1]);
    if (!(nx > 0.0) || !(nt > 0.0)) return 1.0;
    best = std::max(best, std::abs(xv[0] * t[k][1] - xv[1] * t[k][0]) / (nx * nt));
  }
  return best;
}

}  // namespace strato::conormal
