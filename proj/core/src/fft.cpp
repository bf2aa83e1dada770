#include "strato/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace strato::fft {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans execute on their own aligned buffers so that the chosen codelets (and
// therefore the roundoff) never depend on the caller's allocation.
class Plan {
 public:
  explicit Plan(int n) : n_(n) {
    const std::size_t real_size = static_cast<std::size_t>(n) * n;
    const std::size_t complex_size = static_cast<std::size_t>(n) * (n / 2 + 1);
    real_ = fftw_alloc_real(real_size);
    complex_ = fftw_alloc_complex(complex_size);
    if (real_ == nullptr || complex_ == nullptr) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    r2c_ = fftw_plan_dft_r2c_2d(n, n, real_, complex_, FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_2d(n, n, complex_, real_, FFTW_ESTIMATE);
    if (r2c_ == nullptr || c2r_ == nullptr) throw std::runtime_error("fftw: plan creation failed");
  }

  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
    fftw_free(real_);
    fftw_free(complex_);
  }

  void forward(std::span<const double> in, Spectrum& out) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(r2c_);
    const double scale = 1.0 / (static_cast<double>(n_) * n_);
    auto dst = out.data();
    for (std::size_t k = 0; k < dst.size(); ++k) {
      dst[k] = Complex(complex_[k][0] * scale, complex_[k][1] * scale);
    }
  }

  void inverse(const Spectrum& in, std::span<double> out) {
    auto src = in.data();
    static_assert(sizeof(Complex) == sizeof(fftw_complex));
    std::memcpy(complex_, src.data(), src.size() * sizeof(Complex));
    fftw_execute(c2r_);
    std::copy(real_, real_ + out.size(), out.begin());
  }

 private:
  int n_;
  double* real_ = nullptr;
  fftw_complex* complex_ = nullptr;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
};

Plan& plan_for(int n) {
  thread_local std::map<int, std::unique_ptr<Plan>> plans;
  auto& slot = plans[n];
  if (!slot) slot = std::make_unique<Plan>(n);
  return *slot;
}

}  // namespace

void forward_into(std::span<const double> values, Spectrum& out) {
  const auto& grid = out.grid();
  if (values.size() != grid.size()) throw std::invalid_argument("fft::forward: size mismatch");
  plan_for(grid.n()).forward(values, out);
}

Spectrum forward(const GridSpec& grid, std::span<const double> values) {
  Spectrum out(grid);
  forward_into(values, out);
  return out;
}

void inverse_into(const Spectrum& spectrum, std::span<double> out) {
  if (out.size() != spectrum.grid().size()) throw std::invalid_argument("fft::inverse: size mismatch");
  plan_for(spectrum.grid().n()).inverse(spectrum, out);
}

std::vector<double> inverse(const Spectrum& spectrum) {
  std::vector<double> out(spectrum.grid().size());
  inverse_into(spectrum, out);
  return out;
}

}  // namespace strato::fft
