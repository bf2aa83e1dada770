#pragma once

#include <vector>

namespace strato::rankine {

/// e^{-x} I_0(x) for x >= 0.
double scaled_bessel_i0(double x);

/// Heat flow of the unit-disc indicator at time tau (= mu t) and radius r.
/// Throws std::invalid_argument for tau <= 0 or r < 0.
double exact_vorticity(double tau, double r);

/// 1 - exact_vorticity(tau, r), computed without cancellation for r < 1.
double exact_complement(double tau, double r);

/// Azimuthal velocity of the heat-flowed disc, (1/r) int_0^r omega(tau, s) s ds.
double azimuthal_velocity(double tau, double r);

/// Gauss-Legendre panel discretization of omega(tau, .) around r = 1.
struct RadialProfile {
  double tau = 0.0;
  std::vector<double> r;
  std::vector<double> weight;      // quadrature weights in r (no 2 pi r factor)
  std::vector<double> omega;       // omega(tau, r)
  std::vector<double> defect;      // omega - 1_{r<1}
  std::vector<double> cumulative;  // int_0^r defect(s) s ds
  double r_max = 0.0;
};

RadialProfile radial_profile(double tau, int panels_per_side = 32, int order = 16);

/// |omega(tau) - 1_D|_{L^p(R^2)}; p >= 1.
double vorticity_lp_error(double tau, double p);
double vorticity_lp_error(const RadialProfile& profile, double p);

/// |v(tau) - v(0)|_{L^p(R^2)} for the azimuthal velocities; p >= 2.
double velocity_lp_error(double tau, double p);
double velocity_lp_error(const RadialProfile& profile, double p);

/// int (omega(tau) - 1_D) dx, which vanishes analytically.
double mass_defect(const RadialProfile& profile);

/// Rescaled complement Z = 1 - omega(tau, sqrt(tau) |x|) for 0 < |x| <= 1/sqrt(tau), tau <= 1.
double z_field(double tau, double x);

/// Explicit lower bound for Z on the annulus 1/sqrt(tau) - 1 <= |x| <= 1/sqrt(tau):
/// (c / 2 pi) int_1^{1/sqrt(tau)} e^{-k^2/4} dk with c = int_0^{pi/4} e^{-a^2} da.
double z_lower_bound(double tau);

/// Minimum of z_field over `samples` radii spanning the annulus above.
double z_annulus_min(double tau, int samples = 64);

/// Log-spaced values from lo to hi inclusive.
std::vector<double> log_ladder(double lo, double hi, int points);

}  // namespace strato::rankine
