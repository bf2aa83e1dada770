#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "strato/grid.hpp"

namespace strato {

using Complex = std::complex<double>;

/// Half-plane Fourier coefficients of a real field on a GridSpec.
///
/// Entry (i, j) holds the coefficient of exp(i (k_i x1 + k_j x2)) for
/// i in [0, n) and j in [0, n/2]; the other half follows from Hermitian
/// symmetry. Coefficients are normalized so that the field value is the plain
/// sum over all modes (forward transform divides by n^2).
class Spectrum {
 public:
  explicit Spectrum(const GridSpec& grid);
  Spectrum(const GridSpec& grid, std::vector<Complex> coeffs);

  const GridSpec& grid() const { return grid_; }
  int rows() const { return grid_.n(); }
  int cols() const { return grid_.spectral_columns(); }

  Complex& operator()(int i, int j) { return coeffs_[static_cast<std::size_t>(i) * cols() + j]; }
  Complex operator()(int i, int j) const { return coeffs_[static_cast<std::size_t>(i) * cols() + j]; }

  std::span<Complex> data() { return coeffs_; }
  std::span<const Complex> data() const { return coeffs_; }

  /// Multiplicity of column j when expanding to the full plane.
  double column_weight(int j) const { return (j == 0 || j == grid_.n() / 2) ? 1.0 : 2.0; }

  Spectrum& operator+=(const Spectrum& other);
  Spectrum& operator-=(const Spectrum& other);
  Spectrum& operator*=(double s);

 private:
  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

Spectrum operator+(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a, const Spectrum& b);
Spectrum operator*(double s, Spectrum a);

/// Real samples of a periodic function, immutable after construction.
///
/// Values are stored row-major with the x1 index as the slow index:
/// value(i, j) = f(coord(i), coord(j)). The spectrum is computed on first use
/// and shared between copies; computing it is thread-safe.
class ScalarField {
 public:
  ScalarField(const GridSpec& grid, std::vector<double> values);

  static ScalarField zeros(const GridSpec& grid);
  static ScalarField constant(const GridSpec& grid, double c);
  static ScalarField sample(const GridSpec& grid, const std::function<double(double, double)>& f);
  static ScalarField from_spectrum(const Spectrum& spectrum);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * grid_.n() + j]; }
  const Spectrum& spectrum() const;

  double sum() const;
  double mean() const { return sum() / static_cast<double>(grid_.size()); }
  double integral() const { return sum() * grid_.cell_area(); }
  double max_abs() const;
  bool all_finite() const;

 private:
  struct SpectrumCache;

  GridSpec grid_;
  std::vector<double> values_;
  std::shared_ptr<SpectrumCache> cache_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
/// Pointwise product (no dealiasing; see spectral::product for that).
ScalarField operator*(const ScalarField& a, const ScalarField& b);

/// Two-component field (velocity, or a member of a vector-field family).
struct VectorField {
  ScalarField u1;
  ScalarField u2;

  const GridSpec& grid() const { return u1.grid(); }
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);

/// Throws std::invalid_argument when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace strato
