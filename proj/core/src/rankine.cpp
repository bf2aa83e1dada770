#include "strato/rankine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "strato/quadrature.hpp"

namespace strato::rankine {
namespace {

constexpr double kPi = std::numbers::pi;
// Half-width of the window around r = 1 in units of sqrt(tau); the kernel
// factor there is e^{-49}.
constexpr double kWindow = 14.0;
// The power series still converges cleanly here, while the asymptotic series
// only reaches full double precision beyond it.
constexpr double kBesselSplit = 20.0;

const quad::QuadOptions kInner{1e-14, 1e-13, 4000};

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("rankine: tau must be positive");
}

// Density of the radial kernel in s for fixed r.
double kernel(double tau, double r, double s) {
  const double d = r - s;
  return s * std::exp(-d * d / (4.0 * tau)) * scaled_bessel_i0(r * s / (2.0 * tau)) / (2.0 * tau);
}

double integrate_kernel(double tau, double r, double lo, double hi) {
  if (hi <= lo) return 0.0;
  auto f = [tau, r](double s) { return kernel(tau, r, s); };
  double total = 0.0;
  if (r > lo && r < hi) {
    total += quad::integrate(f, lo, r, kInner).value;
    total += quad::integrate(f, r, hi, kInner).value;
  } else {
    total += quad::integrate(f, lo, hi, kInner).value;
  }
  return total;
}

// Legendre polynomials P_0..P_{n} at x.
std::vector<double> legendre(int n, double x) {
  std::vector<double> p(n + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = x;
  for (int k = 2; k <= n; ++k) p[k] = ((2.0 * k - 1.0) * x * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
  return p;
}

// W(k, l) = int_{-1}^{x_k} ell_l(t) dt for the Lagrange basis on the Gauss nodes.
std::vector<double> integration_matrix(const quad::GaussRule& rule) {
  const int m = static_cast<int>(rule.nodes.size());
  std::vector<std::vector<double>> pn(m);
  for (int l = 0; l < m; ++l) pn[l] = legendre(m - 1, rule.nodes[l]);
  std::vector<double> w(static_cast<std::size_t>(m) * m, 0.0);
  for (int k = 0; k < m; ++k) {
    const double x = rule.nodes[k];
    const auto pk = legendre(m, x);
    std::vector<double> antideriv(m);
    antideriv[0] = x + 1.0;
    for (int n = 1; n < m; ++n) antideriv[n] = (pk[n + 1] - pk[n - 1]) / (2.0 * n + 1.0);
    for (int l = 0; l < m; ++l) {
      double acc = 0.0;
      for (int n = 0; n < m; ++n) acc += 0.5 * (2.0 * n + 1.0) * pn[l][n] * antideriv[n];
      w[static_cast<std::size_t>(k) * m + l] = rule.weights[l] * acc;
    }
  }
  return w;
}

}  // namespace

double scaled_bessel_i0(double x) {
  x = std::abs(x);
  if (x <= kBesselSplit) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(-x) * sum;
  }
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double exact_complement(double tau, double r) {
  require_tau(tau);
  if (!(r >= 0.0)) throw std::invalid_argument("rankine: r must be >= 0");
  const double w = kWindow * std::sqrt(tau);
  if (r < 1.0) return integrate_kernel(tau, r, 1.0, std::max(1.0, r + w));
  return 1.0 - integrate_kernel(tau, r, std::max(0.0, r - w), 1.0);
}

double exact_vorticity(double tau, double r) {
  require_tau(tau);
  if (!(r >= 0.0)) throw std::invalid_argument("rankine: r must be >= 0");
  if (r < 1.0) return 1.0 - exact_complement(tau, r);
  return integrate_kernel(tau, r, std::max(0.0, r - kWindow * std::sqrt(tau)), 1.0);
}

double azimuthal_velocity(double tau, double r) {
  require_tau(tau);
  if (r <= 0.0) return 0.0;
  const auto f = [tau](double s) { return exact_vorticity(tau, s) * s; };
  const double w = kWindow * std::sqrt(tau);
  const quad::QuadOptions opts{1e-12, 1e-11, 2000};
  double inner = 0.0;
  // Integrate the smooth pieces separately: below the window omega is ~1.
  const double a = std::max(0.0, 1.0 - w);
  if (r <= a) return 0.5 * r;
  inner = 0.5 * a * a;
  const double mid = std::min(r, 1.0);
  inner += quad::integrate(f, a, mid, opts).value;
  if (r > 1.0) inner += quad::integrate(f, 1.0, std::min(r, 1.0 + w), opts).value;
  return inner / r;
}

RadialProfile radial_profile(double tau, int panels_per_side, int order) {
  require_tau(tau);
  if (panels_per_side < 1 || order < 2) throw std::invalid_argument("radial_profile: bad discretization");
  const double w = kWindow * std::sqrt(tau);
  const double a = std::max(0.0, 1.0 - w);
  const double b = 1.0 + w;
  const auto rule = quad::gauss_legendre(order);
  const auto imat = integration_matrix(rule);

  RadialProfile prof;
  prof.tau = tau;
  prof.r_max = b;
  // Defect integral over [0, a], where 1 - omega is at most e^{-49}.
  double running = 0.0;
  auto add_side = [&](double lo, double hi, bool inside) {
    const double h = (hi - lo) / panels_per_side;
    for (int pnl = 0; pnl < panels_per_side; ++pnl) {
      const double left = lo + pnl * h;
      std::vector<double> f(order);
      const std::size_t base = prof.r.size();
      for (int k = 0; k < order; ++k) {
        const double r = left + 0.5 * h * (rule.nodes[k] + 1.0);
        const double defect = inside ? -exact_complement(tau, r) : exact_vorticity(tau, r);
        prof.r.push_back(r);
        prof.weight.push_back(0.5 * h * rule.weights[k]);
        prof.omega.push_back(inside ? 1.0 + defect : defect);
        prof.defect.push_back(defect);
        f[k] = defect * r;
      }
      for (int k = 0; k < order; ++k) {
        double acc = 0.0;
        for (int l = 0; l < order; ++l) acc += imat[static_cast<std::size_t>(k) * order + l] * f[l];
        prof.cumulative.push_back(running + 0.5 * h * acc);
      }
      double panel = 0.0;
      for (int k = 0; k < order; ++k) panel += prof.weight[base + k] * f[k];
      running += panel;
    }
  };
  add_side(a, 1.0, true);
  add_side(1.0, b, false);
  prof.cumulative.push_back(running);  // value at r_max, read by mass_defect
  return prof;
}

double vorticity_lp_error(const RadialProfile& prof, double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("vorticity_lp_error: p must lie in [1, inf)");
  double acc = 0.0;
  for (std::size_t k = 0; k < prof.r.size(); ++k) {
    acc += prof.weight[k] * std::pow(std::abs(prof.defect[k]), p) * 2.0 * kPi * prof.r[k];
  }
  return std::pow(acc, 1.0 / p);
}

double vorticity_lp_error(double tau, double p) { return vorticity_lp_error(radial_profile(tau), p); }

double velocity_lp_error(const RadialProfile& prof, double p) {
  if (!(p >= 2.0) || std::isinf(p)) throw std::invalid_argument("velocity_lp_error: p must lie in [2, inf)");
  double acc = 0.0;
  for (std::size_t k = 0; k < prof.r.size(); ++k) {
    const double v = std::abs(prof.cumulative[k]) / prof.r[k];
    acc += prof.weight[k] * std::pow(v, p) * 2.0 * kPi * prof.r[k];
  }
  return std::pow(acc, 1.0 / p);
}

double velocity_lp_error(double tau, double p) { return velocity_lp_error(radial_profile(tau), p); }

double mass_defect(const RadialProfile& prof) { return 2.0 * kPi * prof.cumulative.back(); }

double z_field(double tau, double x) {
  require_tau(tau);
  if (tau > 1.0) throw std::invalid_argument("z_field: tau must be <= 1");
  const double edge = 1.0 / std::sqrt(tau);
  if (!(x > 0.0) || x > edge * (1.0 + 1e-14)) throw std::out_of_range("z_field: |x| outside (0, 1/sqrt(tau)]");
  return exact_complement(tau, std::min(1.0, std::sqrt(tau) * x));
}

double z_lower_bound(double tau) {
  require_tau(tau);
  if (tau > 1.0) throw std::invalid_argument("z_lower_bound: tau must be <= 1");
  const double c = 0.5 * std::sqrt(kPi) * std::erf(0.25 * kPi);
  const double upper = 1.0 / std::sqrt(tau);
  // int_1^u e^{-k^2/4} dk = sqrt(pi) (erf(u/2) - erf(1/2))
  return c / (2.0 * kPi) * std::sqrt(kPi) * (std::erf(0.5 * upper) - std::erf(0.5));
}

double z_annulus_min(double tau, int samples) {
  const double edge = 1.0 / std::sqrt(tau);
  const double inner = std::max(edge - 1.0, 1e-12);
  double best = 1.0;
  for (int k = 0; k < samples; ++k) {
    const double x = inner + (edge - inner) * k / (samples - 1);
    best = std::min(best, z_field(tau, x));
  }
  return best;
}

std::vector<double> log_ladder(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) throw std::invalid_argument("log_ladder: need 0 < lo < hi, points >= 2");
  std::vector<double> out(points);
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < points; ++k) out[k] = std::exp(a + (b - a) * k / (points - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace strato::rankine
