#include "strato/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "strato/fft.hpp"

namespace strato::spectral {

namespace {
constexpr Complex kI{0.0, 1.0};

void require_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
}

double lp_of_magnitudes(const std::vector<double>& mag, double p, double cell_area) {
  double m = 0.0;
  for (double v : mag) m = std::max(m, v);
  if (std::isinf(p)) return m;
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : mag) s += std::pow(v / m, p);
  return m * std::pow(s * cell_area, 1.0 / p);
}
}  // namespace

ScalarField derivative(const ScalarField& f, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("derivative: axis must be 1 or 2");
  return apply_multiplier(f, [axis](const Mode& m) { return kI * (axis == 1 ? m.k1_odd : m.k2_odd); });
}

ScalarField laplacian(const ScalarField& f) {
  return apply_multiplier(f, [](const Mode& m) { return -m.k_sq(); });
}

ScalarField divergence(const VectorField& v) {
  require_same_grid(v.u1.grid(), v.u2.grid(), "divergence");
  Spectrum s = apply_multiplier(v.u1.spectrum(), [](const Mode& m) { return kI * m.k1_odd; });
  s += apply_multiplier(v.u2.spectrum(), [](const Mode& m) { return kI * m.k2_odd; });
  return ScalarField::from_spectrum(s);
}

ScalarField curl(const VectorField& v) {
  require_same_grid(v.u1.grid(), v.u2.grid(), "curl");
  Spectrum s = apply_multiplier(v.u2.spectrum(), [](const Mode& m) { return kI * m.k1_odd; });
  s -= apply_multiplier(v.u1.spectrum(), [](const Mode& m) { return kI * m.k2_odd; });
  return ScalarField::from_spectrum(s);
}

VectorField gradient(const ScalarField& f) { return {derivative(f, 1), derivative(f, 2)}; }

VectorField perp_gradient(const ScalarField& f) { return {-1.0 * derivative(f, 2), derivative(f, 1)}; }

Spectrum biot_savart_component(const Spectrum& omega, int component) {
  // psi = -omega / |k|^2 with the derivative-consistent |k|^2, v = (-d2 psi, d1 psi).
  if (component == 1) {
    return apply_multiplier(omega, [](const Mode& m) {
      const double k2 = m.k_odd_sq();
      return k2 == 0.0 ? Complex{} : kI * m.k2_odd / k2;
    });
  }
  return apply_multiplier(omega, [](const Mode& m) {
    const double k2 = m.k_odd_sq();
    return k2 == 0.0 ? Complex{} : -kI * m.k1_odd / k2;
  });
}

VectorField biot_savart(const ScalarField& omega) {
  const Spectrum& s = omega.spectrum();
  return {ScalarField::from_spectrum(biot_savart_component(s, 1)),
          ScalarField::from_spectrum(biot_savart_component(s, 2))};
}

Spectrum singular_L(const Spectrum& rho) {
  return apply_multiplier(rho, [](const Mode& m) {
    const double k2 = m.k_sq();
    return k2 == 0.0 ? Complex{} : -kI * m.k1_odd / k2;
  });
}

ScalarField singular_L(const ScalarField& rho) { return ScalarField::from_spectrum(singular_L(rho.spectrum())); }

ScalarField heat_propagate(const ScalarField& f, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("heat_propagate: tau must be >= 0");
  if (tau == 0.0) return f;
  return apply_multiplier(f, [tau](const Mode& m) { return std::exp(-tau * m.k_sq()); });
}

double lp_norm(const ScalarField& f, double p) {
  require_p(p);
  std::vector<double> mag(f.values().size());
  std::transform(f.values().begin(), f.values().end(), mag.begin(), [](double v) { return std::abs(v); });
  return lp_of_magnitudes(mag, p, f.grid().cell_area());
}

double lp_norm(const VectorField& v, double p) {
  require_p(p);
  require_same_grid(v.u1.grid(), v.u2.grid(), "lp_norm");
  auto a = v.u1.values();
  auto b = v.u2.values();
  std::vector<double> mag(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) mag[k] = std::hypot(a[k], b[k]);
  return lp_of_magnitudes(mag, p, v.grid().cell_area());
}

double spectral_l2_norm(const ScalarField& f) {
  const Spectrum& s = f.spectrum();
  double acc = 0.0;
  for (int i = 0; i < s.rows(); ++i) {
    for (int j = 0; j < s.cols(); ++j) acc += s.column_weight(j) * std::norm(s(i, j));
  }
  return std::sqrt(acc * f.grid().box_area());
}

namespace {
struct VelocityGradient {
  ScalarField a11, a12, a21, a22;  // a_ij = d_j v_i
};

VelocityGradient velocity_gradient(const VectorField& v) {
  return {derivative(v.u1, 1), derivative(v.u1, 2), derivative(v.u2, 1), derivative(v.u2, 2)};
}
}  // namespace

double czygmund_ratio(const ScalarField& omega, double p) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("czygmund_ratio: p must lie in (1, inf)");
  const double w = lp_norm(omega, p);
  if (w == 0.0) return 0.0;
  const auto g = velocity_gradient(biot_savart(omega));
  std::vector<double> mag(omega.grid().size());
  for (std::size_t k = 0; k < mag.size(); ++k) {
    const double a = g.a11.values()[k], b = g.a12.values()[k], c = g.a21.values()[k], d = g.a22.values()[k];
    mag[k] = std::sqrt(a * a + b * b + c * c + d * d);
  }
  return lp_of_magnitudes(mag, p, omega.grid().cell_area()) / w;
}

double velocity_gradient_sup(const VectorField& v) {
  const auto g = velocity_gradient(v);
  double best = 0.0;
  for (std::size_t k = 0; k < v.grid().size(); ++k) {
    const double a = g.a11.values()[k], b = g.a12.values()[k], c = g.a21.values()[k], d = g.a22.values()[k];
    const double fro2 = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
    best = std::max(best, std::sqrt(0.5 * (fro2 + disc)));
  }
  return best;
}

bool retained_two_thirds(const GridSpec& grid, int i, int j) {
  const int cut = two_thirds_cutoff(grid);
  return std::abs(grid.frequency_index(i)) <= cut && j <= cut;
}

void truncate_two_thirds(Spectrum& s) {
  const auto& grid = s.grid();
  for (int i = 0; i < s.rows(); ++i) {
    for (int j = 0; j < s.cols(); ++j) {
      if (!retained_two_thirds(grid, i, j)) s(i, j) = Complex{};
    }
  }
}

ScalarField dealias(const ScalarField& f) {
  Spectrum s = f.spectrum();
  truncate_two_thirds(s);
  return ScalarField::from_spectrum(s);
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "product");
  const ScalarField raw = dealias(a) * dealias(b);
  Spectrum s = raw.spectrum();
  truncate_two_thirds(s);
  return ScalarField::from_spectrum(s);
}

ScalarField advect(const VectorField& v, const ScalarField& f) {
  return product(v.u1, derivative(f, 1)) + product(v.u2, derivative(f, 2));
}

ScalarField drop_gradient_kernel(const ScalarField& f) {
  return apply_multiplier(f, [](const Mode& m) { return m.k_odd_sq() == 0.0 ? 0.0 : 1.0; });
}

double evaluate(const Spectrum& s, double x1, double x2) {
  const auto& grid = s.grid();
  const int n = grid.n();
  const int cols = grid.spectral_columns();
  const double y1 = x1 + grid.half_length();
  const double y2 = x2 + grid.half_length();
  std::vector<Complex> e1(n), e2(cols);
  for (int i = 0; i < n; ++i) e1[i] = std::polar(1.0, grid.wavenumber(i) * y1);
  for (int j = 0; j < cols; ++j) e2[j] = std::polar(1.0, j * grid.fundamental() * y2);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    Complex row{};
    for (int j = 0; j < cols; ++j) row += s.column_weight(j) * s(i, j) * e2[j];
    acc += (row * e1[i]).real();
  }
  return acc;
}

ScalarField random_band_limited(const GridSpec& grid, double k_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Spectrum s(grid);
  const int n = grid.n();
  for_each_mode(grid, [&](const Mode& m) {
    const double k = std::sqrt(m.k_sq());
    // Draw for every mode so the sequence does not depend on k_max.
    const Complex c(normal(rng), normal(rng));
    if (k == 0.0 || k > k_max || m.k1_odd != m.k1 || m.j == n / 2) return;
    if (m.j == 0 && grid.frequency_index(m.i) < 0) return;  // filled by symmetry
    s(m.i, m.j) = c;
    if (m.j == 0) s((n - m.i) % n, 0) = std::conj(c);
  });
  ScalarField f = ScalarField::from_spectrum(s);
  const double peak = f.max_abs();
  return peak > 0.0 ? (1.0 / peak) * f : f;
}

double spectral_extent(const ScalarField& f, double rel_tol) {
  const Spectrum& s = f.spectrum();
  double cmax = 0.0;
  for (auto c : s.data()) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0) return 0.0;
  double kmax = 0.0;
  std::size_t k = 0;
  auto data = s.data();
  for_each_mode(f.grid(), [&](const Mode& m) {
    if (std::abs(data[k]) > rel_tol * cmax) kmax = std::max(kmax, std::sqrt(m.k_sq()));
    ++k;
  });
  return kmax;
}

}  // namespace strato::spectral
