#pragma once

#include <cstdint>

#include "strato/field.hpp"

namespace strato::spectral {

/// One Fourier mode of the half-plane spectrum together with its wavevector.
struct Mode {
  int i;
  int j;
  double k1;      // even-multiplier wavenumbers
  double k2;
  double k1_odd;  // derivative wavenumbers (zero at Nyquist)
  double k2_odd;

  double k_sq() const { return k1 * k1 + k2 * k2; }
  double k_odd_sq() const { return k1_odd * k1_odd + k2_odd * k2_odd; }
};

/// Calls f(Mode) for every stored mode, in storage order.
template <class F>
void for_each_mode(const GridSpec& grid, F&& f) {
  const int n = grid.n();
  const int cols = grid.spectral_columns();
  for (int i = 0; i < n; ++i) {
    const double k1 = grid.wavenumber(i);
    const double k1o = grid.odd_wavenumber(i);
    for (int j = 0; j < cols; ++j) {
      f(Mode{i, j, k1, j == n / 2 ? -grid.nyquist() : j * grid.fundamental(), k1o,
             j == n / 2 ? 0.0 : j * grid.fundamental()});
    }
  }
}

/// Returns the spectrum multiplied mode-wise by m(Mode) (real or complex).
template <class M>
Spectrum apply_multiplier(const Spectrum& in, M&& m) {
  Spectrum out(in.grid());
  auto src = in.data();
  auto dst = out.data();
  std::size_t k = 0;
  for_each_mode(in.grid(), [&](const Mode& mode) {
    dst[k] = src[k] * m(mode);
    ++k;
  });
  return out;
}

template <class M>
ScalarField apply_multiplier(const ScalarField& f, M&& m) {
  return ScalarField::from_spectrum(apply_multiplier(f.spectrum(), std::forward<M>(m)));
}

/// Spectral partial derivative; axis is 1 or 2.
ScalarField derivative(const ScalarField& f, int axis);
ScalarField laplacian(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField curl(const VectorField& v);
VectorField gradient(const ScalarField& f);
/// Rotated gradient (-d2 f, d1 f).
VectorField perp_gradient(const ScalarField& f);

/// Velocity v = grad^perp Laplacian^{-1} omega on the torus.
///
/// The mean of omega and the Nyquist checkerboard modes (the kernel of the
/// discrete gradient) are discarded; curl(v) reproduces the rest exactly.
VectorField biot_savart(const ScalarField& omega);
Spectrum biot_savart_component(const Spectrum& omega, int component);

/// The order-zero operator d1 Laplacian^{-1}: multiplier -i k1 / |k|^2, so
/// that Laplacian(singular_L(rho)) = d1 rho. Zero mode set to 0.
ScalarField singular_L(const ScalarField& rho);
Spectrum singular_L(const Spectrum& rho);

/// Heat semigroup exp(tau Laplacian); tau >= 0.
ScalarField heat_propagate(const ScalarField& f, double tau);

/// Midpoint Riemann sum (sum |f|^p dx^2)^(1/p); p = infinity gives max |f|.
/// Throws std::invalid_argument for p < 1.
double lp_norm(const ScalarField& f, double p);
/// L^p norm of the pointwise Euclidean length of v.
double lp_norm(const VectorField& v, double p);

/// L^2 norm evaluated in Fourier space (Parseval).
double spectral_l2_norm(const ScalarField& f);

/// Ratio |grad v|_{L^p} / |omega|_{L^p} for v = biot_savart(omega), using the
/// pointwise Frobenius norm of grad v. Returns 0 for omega = 0.
/// Throws std::invalid_argument unless 1 < p < infinity.
double czygmund_ratio(const ScalarField& omega, double p);

/// max_x of the operator 2-norm of grad v(x).
double velocity_gradient_sup(const VectorField& v);

// ---------------------------------------------------------------- dealiasing

/// Highest retained frequency index under the two-thirds rule.
inline int two_thirds_cutoff(const GridSpec& grid) { return grid.n() / 3; }
bool retained_two_thirds(const GridSpec& grid, int i, int j);
void truncate_two_thirds(Spectrum& s);
ScalarField dealias(const ScalarField& f);

/// Alias-free product: both factors are truncated to the two-thirds band,
/// multiplied on the grid, and the result truncated again.
ScalarField product(const ScalarField& a, const ScalarField& b);

/// Dealiased advection term v . grad f.
ScalarField advect(const VectorField& v, const ScalarField& f);

/// Removes the mean and the Nyquist checkerboard modes.
ScalarField drop_gradient_kernel(const ScalarField& f);

// -------------------------------------------------------------- utilities

/// Trigonometric interpolant of a spectrum at an arbitrary point.
double evaluate(const Spectrum& s, double x1, double x2);

/// Random real field with zero mean, Fourier support in 0 < |k| <= k_max and
/// unit maximum; deterministic in `seed`.
ScalarField random_band_limited(const GridSpec& grid, double k_max, std::uint64_t seed);

/// Largest |k| carrying a coefficient above `rel_tol` times the largest one.
double spectral_extent(const ScalarField& f, double rel_tol = 1e-13);

}  // namespace strato::spectral
