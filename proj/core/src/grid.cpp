#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "strato/fft.hpp"
#include "strato/field.hpp"
#include "strato/grid.hpp"

namespace strato {

GridSpec::GridSpec(int n, double half_length) : n_(n), half_length_(half_length) {
  if (n < 16 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("GridSpec: n must be a power of two >= 16, got " + std::to_string(n));
  }
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw std::invalid_argument("GridSpec: half_length must be positive");
  }
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

// ---------------------------------------------------------------- Spectrum

Spectrum::Spectrum(const GridSpec& grid) : grid_(grid), coeffs_(grid.spectral_size()) {}

Spectrum::Spectrum(const GridSpec& grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid.spectral_size()) throw std::invalid_argument("Spectrum: size mismatch");
}

Spectrum& Spectrum::operator+=(const Spectrum& other) {
  require_same_grid(grid_, other.grid_, "Spectrum::operator+=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& other) {
  require_same_grid(grid_, other.grid_, "Spectrum::operator-=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

Spectrum& Spectrum::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
Spectrum operator*(double s, Spectrum a) { return a *= s; }

// ------------------------------------------------------------- ScalarField

struct ScalarField::SpectrumCache {
  std::once_flag once;
  std::optional<Spectrum> spectrum;
};

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)), cache_(std::make_shared<SpectrumCache>()) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("ScalarField: size mismatch");
}

ScalarField ScalarField::zeros(const GridSpec& grid) { return ScalarField(grid, std::vector<double>(grid.size(), 0.0)); }

ScalarField ScalarField::constant(const GridSpec& grid, double c) {
  return ScalarField(grid, std::vector<double>(grid.size(), c));
}

ScalarField ScalarField::sample(const GridSpec& grid, const std::function<double(double, double)>& f) {
  std::vector<double> v(grid.size());
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    const double x1 = grid.coord(i);
    for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(i) * n + j] = f(x1, grid.coord(j));
  }
  return ScalarField(grid, std::move(v));
}

ScalarField ScalarField::from_spectrum(const Spectrum& spectrum) {
  return ScalarField(spectrum.grid(), fft::inverse(spectrum));
}

const Spectrum& ScalarField::spectrum() const {
  std::call_once(cache_->once, [this] { cache_->spectrum.emplace(fft::forward(grid_, values_)); });
  return *cache_->spectrum;
}

double ScalarField::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

namespace {

template <class Op>
ScalarField combine(const ScalarField& a, const ScalarField& b, Op op, const char* what) {
  require_same_grid(a.grid(), b.grid(), what);
  std::vector<double> out(a.grid().size());
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = op(va[k], vb[k]);
  return ScalarField(a.grid(), std::move(out));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x + y; }, "ScalarField::operator+");
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x - y; }, "ScalarField::operator-");
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x * y; }, "ScalarField::operator*");
}

ScalarField operator*(double s, const ScalarField& a) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (auto& v : out) v *= s;
  return ScalarField(a.grid(), std::move(out));
}

VectorField operator+(const VectorField& a, const VectorField& b) { return {a.u1 + b.u1, a.u2 + b.u2}; }
VectorField operator-(const VectorField& a, const VectorField& b) { return {a.u1 - b.u1, a.u2 - b.u2}; }
VectorField operator*(double s, const VectorField& a) { return {s * a.u1, s * a.u2}; }

}  // namespace strato
