#pragma once

#include <cstddef>
#include <numbers>

namespace strato {

/// Uniform periodic grid on the square [-L, L)^2 with n samples per axis.
///
/// Sample (i, j) sits at (x1, x2) = (-L + i dx, -L + j dx). Fourier indices
/// follow the FFT ordering: index m in [0, n/2) maps to m, index m >= n/2 maps
/// to m - n, so wavenumbers are integer multiples of pi / L.
class GridSpec {
 public:
  GridSpec(int n, double half_length);

  int n() const { return n_; }
  double half_length() const { return half_length_; }
  double dx() const { return 2.0 * half_length_ / n_; }
  double cell_area() const { return dx() * dx(); }
  double box_area() const { return 4.0 * half_length_ * half_length_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

  /// Number of stored columns of a real-to-complex spectrum.
  int spectral_columns() const { return n_ / 2 + 1; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * spectral_columns(); }

  double coord(int i) const { return -half_length_ + i * dx(); }
  double fundamental() const { return std::numbers::pi / half_length_; }

  /// Signed integer frequency of FFT index m along an axis.
  int frequency_index(int m) const { return m < n_ / 2 ? m : m - n_; }

  /// Wavenumber used by even multipliers (|k|^2, heat, dyadic profiles).
  double wavenumber(int m) const { return frequency_index(m) * fundamental(); }

  /// Wavenumber used by odd multipliers (derivatives); the Nyquist mode has no
  /// real-valued derivative and is mapped to zero.
  double odd_wavenumber(int m) const { return m == n_ / 2 ? 0.0 : wavenumber(m); }

  /// Largest wavenumber magnitude on an axis.
  double nyquist() const { return (n_ / 2) * fundamental(); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_;
  double half_length_;
};

}  // namespace strato
