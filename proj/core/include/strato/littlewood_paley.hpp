#pragma once

#include <limits>
#include <vector>

#include "strato/field.hpp"

namespace strato::lp {

/// Radial low-pass profile: 1 on [0, 1/2], 0 on [1, inf), C-infinity and
/// decreasing in between.
double chi_profile(double x);

/// Annulus profile chi(x/2) - chi(x), supported on [1/2, 2].
double phi_profile(double x);

/// Dyadic frequency partition attached to one grid.
class DyadicPartition {
 public:
  explicit DyadicPartition(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int q_min() const { return -1; }
  /// Largest block whose annulus lies below the Nyquist frequency, minus one guard block.
  int q_max() const { return q_max_; }
  /// Lowest homogeneous block carrying any frequency of the box.
  int q_low() const { return q_low_; }

  /// Multiplier of the inhomogeneous block q at |xi| (q = -1 is the low-pass).
  double block_multiplier(int q, double k) const;
  /// Multiplier of the homogeneous block q at |xi|.
  double homogeneous_multiplier(int q, double k) const;
  /// Multiplier of S_q = chi(2^{-q} D).
  double low_pass_multiplier(int q, double k) const;

  /// Largest |xi| on which the blocks -1..q_max sum to one.
  double reconstruction_band() const;

 private:
  GridSpec grid_;
  int q_max_;
  int q_low_;
};

struct BesovParams {
  double s = 0.0;
  double p = 2.0;
  double r = 2.0;
  bool homogeneous = false;
};

ScalarField block(const ScalarField& f, int q, const DyadicPartition& partition);
ScalarField homogeneous_block(const ScalarField& f, int q, const DyadicPartition& partition);
ScalarField low_pass(const ScalarField& f, int q, const DyadicPartition& partition);

struct LadderEntry {
  int q;
  double weighted;  // 2^{qs} |Delta_q f|_{L^p}
};

/// Per-block terms of the Besov norm, in increasing q.
std::vector<LadderEntry> besov_ladder(const ScalarField& f, const BesovParams& params, const DyadicPartition& partition);

/// l^r combination of ladder terms (r = infinity gives the max).
double combine_ladder(const std::vector<LadderEntry>& ladder, double r);

double besov_norm(const ScalarField& f, const BesovParams& params, const DyadicPartition& partition);

/// Hoelder-Zygmund norm B^{s}_{infinity,infinity} (s may be negative).
double holder_norm(const ScalarField& f, double s, const DyadicPartition& partition);

struct BernsteinRatios {
  double derivative;  // |grad Delta_q f|_a / (2^q |Delta_q f|_a)
  double gain;        // |Delta_q f|_b 2^{-2q(1/a - 1/b)} / |Delta_q f|_a
};

/// Throws std::domain_error when the block is zero.
BernsteinRatios bernstein_ratio(const ScalarField& f, int q, double a, double b, const DyadicPartition& partition);

struct BonyParts {
  ScalarField t_uv;  // sum_q S_{q-1}u Delta_q v
  ScalarField t_vu;
  ScalarField remainder;
};

/// Paraproduct split of u*v. Inputs must be band-limited to 2^{q_max - 2};
/// throws std::invalid_argument otherwise.
BonyParts bony_decompose(const ScalarField& u, const ScalarField& v, const DyadicPartition& partition);

struct TimeSeries {
  std::vector<double> times;
  std::vector<ScalarField> fields;
};

struct TimeBesovNorms {
  double tilde;  // l^r_q of |2^{qs} Delta_q f|_{L^beta_T L^p}
  double plain;  // L^beta_T of the Besov norm
};

/// Mixed time-space norms with trapezoidal time quadrature; beta may be infinity.
TimeBesovNorms time_besov_norm(const TimeSeries& series, double beta, const BesovParams& params,
                               const DyadicPartition& partition);

}  // namespace strato::lp
