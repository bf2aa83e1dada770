#include "strato/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "strato/spectral.hpp"

namespace strato::lp {
namespace {

double mollifier(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double lebesgue_combine(const std::vector<double>& values, const std::vector<double>& weights, double beta) {
  if (std::isinf(beta)) return *std::max_element(values.begin(), values.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * std::pow(values[i], beta);
  return std::pow(acc, 1.0 / beta);
}

void check_params(const BesovParams& params) {
  if (!(params.p >= 1.0) || !(params.r >= 1.0)) throw std::invalid_argument("BesovParams: p and r must be >= 1");
}

}  // namespace

double chi_profile(double x) {
  x = std::abs(x);
  if (x <= 0.5) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = mollifier(1.0 - x);
  const double b = mollifier(x - 0.5);
  return a / (a + b);
}

double phi_profile(double x) { return chi_profile(0.5 * x) - chi_profile(x); }

DyadicPartition::DyadicPartition(const GridSpec& grid) : grid_(grid) {
  q_max_ = static_cast<int>(std::floor(std::log2(grid.nyquist()))) - 1;
  q_low_ = -static_cast<int>(std::ceil(std::log2(grid.half_length()))) - 2;
  if (q_max_ < 0) throw std::invalid_argument("DyadicPartition: grid too coarse for any dyadic block");
}

double DyadicPartition::block_multiplier(int q, double k) const {
  if (q == -1) return chi_profile(k);
  return phi_profile(std::ldexp(k, -q));
}

double DyadicPartition::homogeneous_multiplier(int q, double k) const { return phi_profile(std::ldexp(k, -q)); }

double DyadicPartition::low_pass_multiplier(int q, double k) const { return chi_profile(std::ldexp(k, -q)); }

double DyadicPartition::reconstruction_band() const { return std::ldexp(1.0, q_max_); }

ScalarField block(const ScalarField& f, int q, const DyadicPartition& partition) {
  if (q < -1 || q > partition.q_max()) throw std::out_of_range("block: q outside [-1, q_max]");
  require_same_grid(f.grid(), partition.grid(), "block");
  return spectral::apply_multiplier(
      f, [&](const spectral::Mode& m) { return partition.block_multiplier(q, std::sqrt(m.k_sq())); });
}

ScalarField homogeneous_block(const ScalarField& f, int q, const DyadicPartition& partition) {
  if (q > partition.q_max()) throw std::out_of_range("homogeneous_block: q above q_max");
  require_same_grid(f.grid(), partition.grid(), "homogeneous_block");
  return spectral::apply_multiplier(
      f, [&](const spectral::Mode& m) { return partition.homogeneous_multiplier(q, std::sqrt(m.k_sq())); });
}

ScalarField low_pass(const ScalarField& f, int q, const DyadicPartition& partition) {
  require_same_grid(f.grid(), partition.grid(), "low_pass");
  return spectral::apply_multiplier(
      f, [&](const spectral::Mode& m) { return partition.low_pass_multiplier(q, std::sqrt(m.k_sq())); });
}

std::vector<LadderEntry> besov_ladder(const ScalarField& f, const BesovParams& params,
                                      const DyadicPartition& partition) {
  check_params(params);
  std::vector<LadderEntry> ladder;
  const int q0 = params.homogeneous ? partition.q_low() : -1;
  for (int q = q0; q <= partition.q_max(); ++q) {
    const ScalarField b = params.homogeneous ? homogeneous_block(f, q, partition) : block(f, q, partition);
    ladder.push_back({q, std::exp2(q * params.s) * spectral::lp_norm(b, params.p)});
  }
  return ladder;
}

double combine_ladder(const std::vector<LadderEntry>& ladder, double r) {
  double out = 0.0;
  if (std::isinf(r)) {
    for (const auto& e : ladder) out = std::max(out, e.weighted);
    return out;
  }
  for (const auto& e : ladder) out += std::pow(e.weighted, r);
  return std::pow(out, 1.0 / r);
}

double besov_norm(const ScalarField& f, const BesovParams& params, const DyadicPartition& partition) {
  return combine_ladder(besov_ladder(f, params, partition), params.r);
}

double holder_norm(const ScalarField& f, double s, const DyadicPartition& partition) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return besov_norm(f, {s, inf, inf, false}, partition);
}

BernsteinRatios bernstein_ratio(const ScalarField& f, int q, double a, double b, const DyadicPartition& partition) {
  if (!(a >= 1.0) || !(b >= a)) throw std::invalid_argument("bernstein_ratio: need 1 <= a <= b");
  const ScalarField d = block(f, q, partition);
  const double scale = std::max(1.0, f.max_abs());
  if (d.max_abs() <= 1e-13 * scale) throw std::domain_error("bernstein_ratio: block is zero");
  const double norm_a = spectral::lp_norm(d, a);
  const double grad_a = spectral::lp_norm(spectral::gradient(d), a);
  const double two_q = std::exp2(q);
  const double inv_a = 1.0 / a;
  const double inv_b = std::isinf(b) ? 0.0 : 1.0 / b;
  return {grad_a / (two_q * norm_a),
          spectral::lp_norm(d, b) * std::exp2(-2.0 * q * (inv_a - inv_b)) / norm_a};
}

BonyParts bony_decompose(const ScalarField& u, const ScalarField& v, const DyadicPartition& partition) {
  require_same_grid(u.grid(), v.grid(), "bony_decompose");
  require_same_grid(u.grid(), partition.grid(), "bony_decompose");
  const double band = std::ldexp(1.0, partition.q_max() - 2) * (1.0 + 1e-12);
  if (spectral::spectral_extent(u) > band || spectral::spectral_extent(v) > band) {
    throw std::invalid_argument("bony_decompose: inputs must be band-limited to 2^(q_max-2)");
  }
  const int count = partition.q_max() + 2;  // q = -1 .. q_max
  std::vector<ScalarField> ub, vb;
  for (int q = -1; q <= partition.q_max(); ++q) {
    ub.push_back(block(u, q, partition));
    vb.push_back(block(v, q, partition));
  }
  const auto& grid = u.grid();
  auto at = [count](const std::vector<ScalarField>& blocks, int q) -> const ScalarField* {
    const int idx = q + 1;
    return (idx >= 0 && idx < count) ? &blocks[idx] : nullptr;
  };

  ScalarField t_uv = ScalarField::zeros(grid), t_vu = ScalarField::zeros(grid), rem = ScalarField::zeros(grid);
  ScalarField su = ScalarField::zeros(grid), sv = ScalarField::zeros(grid);  // S_{q-1}
  for (int q = -1; q <= partition.q_max(); ++q) {
    t_uv = t_uv + su * *at(vb, q);
    t_vu = t_vu + sv * *at(ub, q);
    ScalarField tilde = *at(vb, q);
    if (const auto* lo = at(vb, q - 1)) tilde = tilde + *lo;
    if (const auto* hi = at(vb, q + 1)) tilde = tilde + *hi;
    rem = rem + *at(ub, q) * tilde;
    if (const auto* lo = at(ub, q - 1)) su = su + *lo;
    if (const auto* lo = at(vb, q - 1)) sv = sv + *lo;
  }
  return {t_uv, t_vu, rem};
}

TimeBesovNorms time_besov_norm(const TimeSeries& series, double beta, const BesovParams& params,
                               const DyadicPartition& partition) {
  check_params(params);
  if (series.times.size() < 2 || series.times.size() != series.fields.size()) {
    throw std::invalid_argument("time_besov_norm: need >= 2 samples with matching fields");
  }
  if (!(beta >= 1.0)) throw std::invalid_argument("time_besov_norm: beta must be >= 1");
  for (std::size_t i = 0; i + 1 < series.times.size(); ++i) {
    if (!(series.times[i + 1] > series.times[i])) throw std::invalid_argument("time_besov_norm: times must increase");
  }
  const auto weights = trapezoid_weights(series.times);

  std::vector<std::vector<LadderEntry>> ladders;
  std::vector<double> totals;
  for (const auto& f : series.fields) {
    ladders.push_back(besov_ladder(f, params, partition));
    totals.push_back(combine_ladder(ladders.back(), params.r));
  }
  std::vector<LadderEntry> tilde_ladder;
  for (std::size_t b = 0; b < ladders.front().size(); ++b) {
    std::vector<double> in_time;
    for (const auto& l : ladders) in_time.push_back(l[b].weighted);
    tilde_ladder.push_back({ladders.front()[b].q, lebesgue_combine(in_time, weights, beta)});
  }
  return {combine_ladder(tilde_ladder, params.r), lebesgue_combine(totals, weights, beta)};
}

}  // namespace strato::lp
