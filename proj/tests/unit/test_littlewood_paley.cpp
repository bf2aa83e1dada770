#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "strato/initdata.hpp"
#include "strato/littlewood_paley.hpp"
#include "strato/spectral.hpp"
#include "test_support.hpp"

using namespace strato;
using strato::testing::max_abs_diff;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kPi = std::numbers::pi;

// Frozen from an independent evaluation of the exp(-1/t) transition.
struct ChiGolden {
  double x;
  double value;
};
constexpr ChiGolden kChiTable[] = {
    {0.0, 1.0},
    {0.5, 1.0},
    {0.6, 0.99944722136307629},
    {0.7, 0.84113089511908501},
    {0.75, 0.5},
    {0.8, 0.15886910488091499},
    {0.9, 0.00055277863692359847},
    {0.99, 2.8633014873642169e-43},
    {1.0, 0.0},
};
}  // namespace

TEST_CASE("chi profile golden table") {
  for (const auto& [x, value] : kChiTable) {
    CHECK(lp::chi_profile(x) == doctest::Approx(value).epsilon(1e-14).scale(1e-300));
  }
  CHECK(lp::chi_profile(3.0) == 0.0);
}

TEST_CASE("phi is nonnegative with support in [1/2, 2]") {
  for (int i = 0; i <= 4000; ++i) {
    const double x = i * 1e-3;
    const double v = lp::phi_profile(x);
    CHECK(v >= 0.0);
    if (x < 0.5 || x > 2.0) CHECK(v == 0.0);
  }
  CHECK(lp::phi_profile(1.0) == doctest::Approx(1.0));
}

TEST_CASE("partition of unity on all represented frequencies") {
  for (const auto& g : {GridSpec(128, kPi), GridSpec(256, 8.0), GridSpec(512, 2.0)}) {
    const lp::DyadicPartition part(g);
    double worst = 0.0;
    spectral::for_each_mode(g, [&](const spectral::Mode& m) {
      const double k = std::sqrt(m.k_sq());
      if (k > part.reconstruction_band()) return;
      double sum = 0.0;
      for (int q = -1; q <= part.q_max(); ++q) sum += part.block_multiplier(q, k);
      worst = std::max(worst, std::abs(sum - 1.0));
    });
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("block index range") {
  const GridSpec g(256, 8.0);
  const lp::DyadicPartition part(g);
  CHECK(part.q_max() == 4);
  CHECK(part.q_low() == -5);
  const auto f = ScalarField::zeros(g);
  CHECK_THROWS_AS(lp::block(f, part.q_max() + 1, part), std::out_of_range);
  CHECK_THROWS_AS(lp::block(f, -2, part), std::out_of_range);
}

TEST_CASE("single sinusoid lives in two adjacent blocks") {
  // fundamental 1.6 so that mode 7 has |k| = 0.7 * 2^4
  const GridSpec g(128, kPi / 1.6);
  const lp::DyadicPartition part(g);
  const auto f = ScalarField::sample(g, [](double x, double) { return std::cos(11.2 * x); });
  const double phi07 = lp::phi_profile(0.7);
  CHECK(max_abs_diff(lp::block(f, 4, part), phi07 * f) <= 1e-12);
  CHECK(max_abs_diff(lp::block(f, 3, part), (1.0 - phi07) * f) <= 1e-12);
  for (int q = -1; q <= part.q_max(); ++q) {
    if (std::abs(q - 4) >= 2) CHECK(lp::block(f, q, part).max_abs() <= 1e-13);
  }
}

TEST_CASE("constant field sits in the low block") {
  const GridSpec g(64, 2.0);
  const lp::DyadicPartition part(g);
  const auto f = ScalarField::constant(g, 1.5);
  CHECK(max_abs_diff(lp::block(f, -1, part), f) <= 1e-14);
  for (int q = 0; q <= part.q_max(); ++q) CHECK(lp::block(f, q, part).max_abs() <= 1e-14);
}

TEST_CASE("reconstruction and almost orthogonality") {
  const GridSpec g(256, 4.0);
  const lp::DyadicPartition part(g);
  const auto f = spectral::random_band_limited(g, part.reconstruction_band(), 7);
  ScalarField sum = ScalarField::zeros(g);
  std::vector<ScalarField> blocks;
  for (int q = -1; q <= part.q_max(); ++q) {
    blocks.push_back(lp::block(f, q, part));
    sum = sum + blocks.back();
  }
  CHECK(max_abs_diff(sum, f) <= 1e-12);
  for (int p = -1; p <= part.q_max(); ++p) {
    for (int q = -1; q <= part.q_max(); ++q) {
      if (std::abs(p - q) < 2) continue;
      CHECK(lp::block(blocks[q + 1], p, part).max_abs() <= 1e-12);
    }
  }
}

TEST_CASE("BV decay of the disc blocks") {
  // 2^q |Delta_q 1_D|_{L^1} stays within a factor 4 across the resolved range
  const GridSpec g(512, 2.0);
  const lp::DyadicPartition part(g);
  const auto disc = init::rasterize_patch(init::PatchSpec{}, g);
  double lo = kInf, hi = 0.0;
  for (int q = 2; q <= part.q_max() - 2; ++q) {
    const double v = std::ldexp(spectral::lp_norm(lp::block(disc, q, part), 1.0), q);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo <= 4.0);
}

TEST_CASE("Besov norm of a single mode") {
  const GridSpec g(128, kPi);
  const lp::DyadicPartition part(g);
  const auto f = ScalarField::sample(g, [](double x, double) { return std::sin(16.0 * x); });
  for (double s : {-0.5, 0.0, 0.5, 1.0}) {
    const double norm = lp::besov_norm(f, {s, 2.0, 2.0, false}, part);
    const double ref = std::pow(2.0, 4 * s) * spectral::lp_norm(f, 2.0);
    CHECK(norm >= 0.5 * ref);
    CHECK(norm <= 2.0 * ref);
  }
}

TEST_CASE("Besov norm is monotone in s") {
  const GridSpec g(128, 2.0);
  const lp::DyadicPartition part(g);
  const auto f = spectral::random_band_limited(g, 60.0, 3) + ScalarField::constant(g, 0.1);
  double prev = 0.0;
  for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    const double v = lp::besov_norm(f, {s, 3.0, 1.0, false}, part);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("interpolation inequality with r = infinity") {
  const GridSpec g(128, 2.0);
  const lp::DyadicPartition part(g);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = spectral::random_band_limited(g, 80.0, seed);
    const double s1 = -0.5, s2 = 1.5, zeta = 0.3;
    const double mid = lp::besov_norm(f, {zeta * s1 + (1 - zeta) * s2, 4.0, kInf, false}, part);
    const double a = lp::besov_norm(f, {s1, 4.0, kInf, false}, part);
    const double b = lp::besov_norm(f, {s2, 4.0, kInf, false}, part);
    CHECK(mid <= 2.0 * std::pow(a, zeta) * std::pow(b, 1 - zeta));
  }
}

TEST_CASE("Hoelder norm of a square-root cusp is grid stable") {
  const double L = 2.0;
  auto cusp = [&](int n) {
    const GridSpec g(n, L);
    const lp::DyadicPartition part(g);
    const auto f =
        ScalarField::sample(g, [&](double x, double) { return std::sqrt(std::abs(std::sin(kPi * x / L))); });
    return lp::holder_norm(f, 0.5, part);
  };
  const double a = cusp(256), b = cusp(512);
  CHECK(std::isfinite(a));
  CHECK(std::abs(b / a - 1.0) <= 0.1);
}

TEST_CASE("homogeneous patch ladder") {
  const GridSpec g(256, 8.0);
  const lp::DyadicPartition part(g);
  const init::PatchSpec disc;
  const auto f = init::rasterize_patch(disc, g);
  for (double p : {2.0, 4.0}) {
    const auto ladder = lp::besov_ladder(f, {1.0 / p, p, kInf, true}, part);
    CHECK(ladder.front().q == part.q_low());
    CHECK(ladder.back().q == part.q_max());
    const double sup = lp::combine_ladder(ladder, kInf);
    CHECK(std::isfinite(sup));
    CHECK(sup / init::bv_norm(disc) <= 4.0);
  }
}

TEST_CASE("Bernstein brackets on a frozen random corpus") {
  const GridSpec g(256, kPi);
  const lp::DyadicPartition part(g);
  const double C = 8.0;
  for (std::uint64_t seed = 100; seed < 104; ++seed) {
    const auto f = spectral::random_band_limited(g, part.reconstruction_band(), seed);
    for (int q = 1; q <= part.q_max() - 2; ++q) {
      for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{2.0, kInf}, std::pair{1.0, kInf}}) {
        const auto r = lp::bernstein_ratio(f, q, a, b, part);
        CHECK(r.derivative >= 1.0 / C);
        CHECK(r.derivative <= C);
        CHECK(r.gain <= C);
      }
    }
  }
  const auto mode = ScalarField::sample(g, [](double x, double y) { return std::cos(16 * x) * std::cos(0 * y); });
  const auto r = lp::bernstein_ratio(mode, 4, 2.0, 2.0, part);
  CHECK(r.derivative >= 0.5);
  CHECK(r.derivative <= 2.0);
  CHECK_THROWS_AS(lp::bernstein_ratio(ScalarField::constant(g, 1.0), 2, 2.0, 2.0, part), std::domain_error);
}

TEST_CASE("Bony decomposition identity") {
  const GridSpec g(256, 4.0);
  const lp::DyadicPartition part(g);
  const double band = std::ldexp(1.0, part.q_max() - 2);
  auto check_identity = [&](const ScalarField& u, const ScalarField& v) {
    const auto parts = lp::bony_decompose(u, v, part);
    const auto uv = u * v;
    const auto total = parts.t_uv + parts.t_vu + parts.remainder;
    CHECK(max_abs_diff(total, uv) <= 1e-10 * std::max(1.0, uv.max_abs()));
    return parts;
  };
  const auto u = spectral::random_band_limited(g, band, 21);
  const auto v = spectral::random_band_limited(g, band, 22);
  const auto uv = check_identity(u, v);
  const auto vu = check_identity(v, u);
  CHECK(max_abs_diff(uv.t_uv, vu.t_vu) <= 1e-13);
  CHECK(max_abs_diff(uv.t_uv, vu.t_uv) > 1e-3);

  check_identity(ScalarField::constant(g, 2.0), v);
  const auto mode = ScalarField::sample(g, [](double x, double y) { return std::cos(kPi / 4 * (5 * x + 3 * y)); });
  check_identity(mode, mode);

  const auto wide = spectral::random_band_limited(g, 2.0 * band, 23);
  CHECK_THROWS_AS(lp::bony_decompose(wide, v, part), std::invalid_argument);
}

TEST_CASE("mixed time norms") {
  const GridSpec g(128, 4.0);
  const lp::DyadicPartition part(g);
  const auto f = spectral::random_band_limited(g, 40.0, 5);
  const lp::BesovParams params{0.5, 2.0, 2.0, false};
  const double base = lp::besov_norm(f, params, part);

  lp::TimeSeries flat{{0.0, 0.5, 1.0, 2.0}, {f, f, f, f}};
  for (double beta : {1.0, 2.0, kInf}) {
    const auto n = lp::time_besov_norm(flat, beta, params, part);
    const double expect = std::isinf(beta) ? base : std::pow(2.0, 1.0 / beta) * base;
    CHECK(n.tilde == doctest::Approx(expect).epsilon(1e-12));
    CHECK(n.plain == doctest::Approx(expect).epsilon(1e-12));
  }

  const auto gauss = ScalarField::sample(g, [](double a, double b) { return std::exp(-4.0 * (a * a + b * b)); });
  lp::TimeSeries heat;
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.05 * k;
    heat.times.push_back(t);
    heat.fields.push_back(spectral::heat_propagate(gauss, 0.1 * t));
  }
  // r >= beta: tilde <= plain; r <= beta: plain <= tilde
  const auto a = lp::time_besov_norm(heat, 1.0, {1.0, kInf, kInf, false}, part);
  CHECK(a.tilde <= a.plain * (1 + 1e-12));
  const auto b = lp::time_besov_norm(heat, kInf, {1.0, kInf, 1.0, false}, part);
  CHECK(b.plain <= b.tilde * (1 + 1e-12));
}
