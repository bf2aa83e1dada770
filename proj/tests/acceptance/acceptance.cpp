// One PASS/FAIL line per acceptance criterion. Tolerances are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "strato/conormal.hpp"
#include "strato/fit.hpp"
#include "strato/harness.hpp"
#include "strato/initdata.hpp"
#include "strato/littlewood_paley.hpp"
#include "strato/rankine.hpp"
#include "strato/solver.hpp"
#include "strato/spectral.hpp"

using namespace strato;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// criterion 1
constexpr double kVorticitySlopeTol = 0.02;
constexpr double kSandwichBand = 5.0;
// criterion 2
constexpr double kVelocitySlopeTol = 0.03;
// criterion 3
constexpr double kSolverOracleRelL2 = 0.02;
// criterion 4
constexpr double kPiSlopeTol = 0.10;
constexpr double kFullVorticitySlopeTol = 0.07;
// criterion 5
constexpr double kUnityTol = 1e-12;
constexpr double kReconstructionTol = 1e-12;
constexpr double kOrthogonalityTol = 1e-12;
constexpr double kBonyRelTol = 1e-10;
constexpr double kBernsteinC = 8.0;
// criterion 6
constexpr double kHeatSpread = 10.0;
// criterion 7
constexpr double kCirculationDriftPerTime = 1e-10;
constexpr double kMaxPrincipleTol = 1e-6;
constexpr double kTaylorGreenTol = 1e-6;
// criterion 8
constexpr double kIndexFactor = 0.9;
constexpr double kAreaDrift = 5e-3;
constexpr double kHolderGrowth = 10.0;
constexpr double kGammaResidual = 5e-2;
constexpr double kGammaReduction = 3.0;
// criterion 9
constexpr double kPatchBound = 4.0;
constexpr double kPatchStability = 0.2;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- oracle rates

Outcome oracle_vorticity_rate() {
  Outcome out;
  const auto ladder = rankine::log_ladder(1e-4, 1e-1, 8);
  const auto band = rankine::log_ladder(1e-6, 1.0, 25);
  std::vector<rankine::RadialProfile> fit_profiles, band_profiles;
  for (double tau : ladder) fit_profiles.push_back(rankine::radial_profile(tau));
  for (double tau : band) band_profiles.push_back(rankine::radial_profile(tau));
  for (double p : {2.0, 3.0, 4.0, 8.0}) {
    std::vector<fit::RatePoint> pts, wide;
    for (std::size_t i = 0; i < ladder.size(); ++i) pts.push_back({ladder[i], rankine::vorticity_lp_error(fit_profiles[i], p)});
    for (std::size_t i = 0; i < band.size(); ++i) wide.push_back({band[i], rankine::vorticity_lp_error(band_profiles[i], p)});
    const double theo = 1.0 / (2.0 * p);
    const auto f = fit::fit_exponent(pts, theo);
    const auto [c1, c2] = fit::sandwich(wide, theo);
    out.require(std::abs(f.slope - theo) <= kVorticitySlopeTol, "p=" + num(p) + " slope " + num(f.slope));
    out.require(c2 / c1 <= kSandwichBand, "C2/C1 " + num(c2 / c1));
  }
  return out;
}

Outcome oracle_velocity_rate() {
  Outcome out;
  const auto ladder = rankine::log_ladder(1e-4, 1e-1, 8);
  std::vector<rankine::RadialProfile> profiles;
  for (double tau : ladder) profiles.push_back(rankine::radial_profile(tau));
  for (double p : {2.0, 4.0}) {
    std::vector<fit::RatePoint> pts;
    for (std::size_t i = 0; i < ladder.size(); ++i) pts.push_back({ladder[i], rankine::velocity_lp_error(profiles[i], p)});
    const double theo = 0.5 + 1.0 / (2.0 * p);
    const auto f = fit::fit_exponent(pts, theo);
    out.require(std::abs(f.slope - theo) <= kVelocitySlopeTol, "p=" + num(p) + " slope " + num(f.slope));
  }
  return out;
}

// ------------------------------------------------------------ solver vs oracle

Outcome solver_vs_oracle() {
  Outcome out;
  const GridSpec g(512, 8.0);
  const double mu = 1e-3;
  const auto w0 = init::rasterize_patch(init::PatchSpec{}, g);
  solver::SimParams params;
  params.mu = mu;
  params.horizon = 1.0;
  const auto traj = solver::run({w0, ScalarField::zeros(g), 0.0}, params, {1.0});
  const auto& w = traj.omega.back();
  const auto heat = spectral::heat_propagate(w0, mu);
  const auto oracle = ScalarField::sample(g, [&](double a, double b) { return rankine::exact_vorticity(mu, std::hypot(a, b)); });
  const double vs_heat = spectral::lp_norm(w - heat, 2.0) / spectral::lp_norm(heat, 2.0);
  const double vs_oracle = spectral::lp_norm(w - oracle, 2.0) / spectral::lp_norm(oracle, 2.0);
  out.require(vs_heat <= kSolverOracleRelL2, "rel L2 vs heat " + num(vs_heat));
  out.require(vs_oracle <= kSolverOracleRelL2, "rel L2 vs oracle " + num(vs_oracle));
  return out;
}

// ----------------------------------------------------------- full-system rates

nlohmann::json full_system_config() {
  return {{"grid", {{"n", 512}, {"half_length", 2.0}}},
          {"patch", {{"kind", "disc"}, {"radius", 1.0}}},
          {"density", {{"kind", "gaussian"}, {"amplitude", 1.0}, {"width", 0.25}}},
          {"sweep",
           {{"mu_ladder", {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}},
            {"p_list", {2}},
            {"sample_times", {1.0}},
            {"quantities", {"vorticity", "pi"}},
            {"workers", 1}}}};
}

Outcome full_system_rate() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto [report, manifest] = harness::run_sweep(harness::parse_config(full_system_config()));
  for (const auto& run : manifest.runs) out.require(run.ok, "run mu=" + num(run.mu) + (run.ok ? " ok" : " " + run.error));
  for (const auto& s : report.slopes) {
    const bool vort = s.quantity == harness::Quantity::vorticity;
    const double tol = vort ? kFullVorticitySlopeTol : kPiSlopeTol;
    const double theo = harness::theoretical_exponent(s.quantity, s.p);
    if (!s.fit) {
      out.require(false, harness::to_string(s.quantity) + " fit failed: " + s.failure);
      continue;
    }
    out.require(std::abs(s.fit->slope - theo) <= tol,
                harness::to_string(s.quantity) + " slope " + num(s.fit->slope) + " (target " + num(theo) + ")");
  }
  out.require(report.slopes.size() == 2, "fitted groups " + std::to_string(report.slopes.size()));
  out.detail += "; wall " + num(seconds_since(t0)) + "s";
  return out;
}

// -------------------------------------------------------------- LP suite

Outcome littlewood_paley_suite() {
  Outcome out;
  double unity = 0.0;
  for (const auto& g : {GridSpec(128, std::numbers::pi), GridSpec(256, 8.0), GridSpec(512, 2.0)}) {
    const lp::DyadicPartition part(g);
    spectral::for_each_mode(g, [&](const spectral::Mode& m) {
      const double k = std::sqrt(m.k_sq());
      if (k > part.reconstruction_band()) return;
      double sum = 0.0;
      for (int q = -1; q <= part.q_max(); ++q) sum += part.block_multiplier(q, k);
      unity = std::max(unity, std::abs(sum - 1.0));
    });
  }
  out.require(unity <= kUnityTol, "unity " + num(unity));

  const GridSpec g(256, 4.0);
  const lp::DyadicPartition part(g);
  double recon = 0.0, ortho = 0.0, bony = 0.0;
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const auto f = spectral::random_band_limited(g, part.reconstruction_band(), seed);
    ScalarField sum = ScalarField::zeros(g);
    std::vector<ScalarField> blocks;
    for (int q = -1; q <= part.q_max(); ++q) {
      blocks.push_back(lp::block(f, q, part));
      sum = sum + blocks.back();
    }
    recon = std::max(recon, (sum - f).max_abs());
    for (int p = -1; p <= part.q_max(); ++p) {
      for (int q = -1; q <= part.q_max(); ++q) {
        if (std::abs(p - q) >= 2) ortho = std::max(ortho, lp::block(blocks[q + 1], p, part).max_abs());
      }
    }
    const double band = std::ldexp(1.0, part.q_max() - 2);
    const auto u = spectral::random_band_limited(g, band, seed + 20);
    const auto v = spectral::random_band_limited(g, band, seed + 40);
    const auto parts = lp::bony_decompose(u, v, part);
    const auto uv = u * v;
    bony = std::max(bony, (parts.t_uv + parts.t_vu + parts.remainder - uv).max_abs() / uv.max_abs());
  }
  out.require(recon <= kReconstructionTol, "reconstruction " + num(recon));
  out.require(ortho <= kOrthogonalityTol, "orthogonality " + num(ortho));
  out.require(bony <= kBonyRelTol, "Bony " + num(bony));

  const GridSpec gb(256, std::numbers::pi);
  const lp::DyadicPartition pb(gb);
  double dmin = kInf, dmax = 0.0, gain = 0.0;
  for (std::uint64_t seed = 100; seed < 104; ++seed) {
    const auto f = spectral::random_band_limited(gb, pb.reconstruction_band(), seed);
    for (int q = 1; q <= pb.q_max() - 2; ++q) {
      for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{2.0, kInf}, std::pair{1.0, kInf}}) {
        const auto r = lp::bernstein_ratio(f, q, a, b, pb);
        dmin = std::min(dmin, r.derivative);
        dmax = std::max(dmax, r.derivative);
        gain = std::max(gain, r.gain);
      }
    }
  }
  out.require(dmin >= 1.0 / kBernsteinC && dmax <= kBernsteinC,
              "Bernstein derivative in [" + num(dmin) + ", " + num(dmax) + "]");
  out.require(gain <= kBernsteinC, "Bernstein gain " + num(gain));
  return out;
}

// ---------------------------------------------------------- heat smoothing

Outcome heat_smoothing() {
  Outcome out;
  const GridSpec g(512, 2.0);
  const lp::DyadicPartition part(g);
  const auto a0 = init::rasterize_patch(init::PatchSpec{}, g);
  const double horizon = 1.0;
  const double b0 = lp::besov_norm(a0, {0.0, kInf, kInf, false}, part);
  auto times = rankine::log_ladder(1e-5, horizon, 100);
  times.insert(times.begin(), 0.0);
  double lo = kInf, hi = 0.0;
  for (double mu : {1e-4, 1e-3, 1e-2}) {
    lp::TimeSeries series;
    for (double t : times) {
      series.times.push_back(t);
      series.fields.push_back(spectral::heat_propagate(a0, mu * t));
    }
    const auto norms = lp::time_besov_norm(series, 1.0, {2.0, kInf, kInf, false}, part);
    const double ratio = mu * norms.tilde / ((1.0 + mu * horizon) * b0);
    out.require(std::isfinite(ratio) && ratio > 0.0, "mu=" + num(mu) + " ratio " + num(ratio));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  out.require(hi / lo <= kHeatSpread, "spread x" + num(hi / lo));
  return out;
}

// ------------------------------------------------- dynamics and conormal

struct BuoyantEllipse {
  solver::Trajectory traj;
  conormal::VectorFieldFamily family;
  conormal::FlowBoundary boundary;
  double index0 = 0.0;
  double area0 = 0.0;
  double holder0 = 0.0;
  double circulation0 = 0.0;
  double rho_l2_0 = 0.0;
};

BuoyantEllipse buoyant_ellipse() {
  const GridSpec g(256, 4.0);
  init::PatchSpec patch;
  patch.kind = init::PatchKind::ellipse;
  patch.semi_axis_1 = 1.0;
  patch.semi_axis_2 = 0.7;
  init::DensitySpec density;
  density.kind = init::DensityKind::gaussian;
  density.amplitude = 1.0;
  density.width = 0.25;
  density.center = {0.4, 0.0};
  const auto w0 = init::rasterize_patch(patch, g);
  const auto rho0 = init::make_density(density, g).rho;
  const auto fam0 = init::initial_vector_family(patch, g);

  BuoyantEllipse r;
  r.family = conormal::make_family(fam0);
  r.boundary = conormal::make_flow_boundary(init::boundary_curve(patch, 256));
  r.index0 = fam0.index;
  r.area0 = conormal::enclosed_area(r.boundary.points);
  r.holder0 = conormal::holder_quotient(r.boundary.points, 0.5);
  r.circulation0 = w0.integral();
  r.rho_l2_0 = spectral::lp_norm(rho0, 2.0);
  solver::SimParams params;
  params.mu = 1e-3;
  params.horizon = 1.0;
  std::vector<double> times;
  for (int k = 1; k <= 10; ++k) times.push_back(0.1 * k);
  r.traj = solver::run({w0, rho0, 0.0}, params, times, [&](const solver::StepRecord& rec) {
    r.family = conormal::advect_family(r.family, rec);
    r.boundary = conormal::advect_boundary(r.boundary, rec);
  });
  return r;
}

Outcome dynamics_invariants(const BuoyantEllipse& run) {
  Outcome out;
  double drift = 0.0;
  bool monotone = true;
  double prev = run.rho_l2_0;
  for (const auto& row : run.traj.diagnostics.rows) {
    drift = std::max(drift, std::abs(row.circulation - run.circulation0) / row.t);
    monotone = monotone && row.rho_l2 <= prev * (1.0 + 1e-12);
    prev = row.rho_l2;
  }
  out.require(drift <= kCirculationDriftPerTime, "circulation drift/t " + num(drift));
  out.require(run.traj.diagnostics.max_principle_excess <= kMaxPrincipleTol,
              "max principle excess " + num(run.traj.diagnostics.max_principle_excess));
  out.require(monotone, std::string("rho L2 ") + (monotone ? "nonincreasing" : "increased"));

  const GridSpec g(128, std::numbers::pi);
  const int mode = 2;
  const double k = mode * std::numbers::pi / g.half_length();
  solver::SimParams params;
  params.mu = 0.05;
  const auto w0 = solver::taylor_green(g, mode, 1.0);
  const auto tg = solver::run({w0, ScalarField::zeros(g), 0.0}, params, {0.5, 1.0});
  double tg_err = 0.0;
  for (std::size_t i = 0; i < tg.times.size(); ++i) {
    tg_err = std::max(tg_err, (tg.omega[i] - std::exp(-2.0 * k * k * params.mu * tg.times[i]) * w0).max_abs());
  }
  out.require(tg_err <= kTaylorGreenTol, "Taylor-Green " + num(tg_err));
  return out;
}

Outcome conormal_suite(const BuoyantEllipse& run) {
  Outcome out;
  const double v = run.traj.diagnostics.rows.back().v_integral;
  const double index = conormal::index(run.family);
  const double bound = kIndexFactor * run.index0 * std::exp(-v);
  out.require(index >= bound, "I(T) " + num(index) + " vs " + num(bound));
  const double area = std::abs(conormal::enclosed_area(run.boundary.points) / run.area0 - 1.0);
  out.require(area <= kAreaDrift, "area drift " + num(area));
  const double holder = conormal::holder_quotient(run.boundary.points, 0.5);
  out.require(holder <= kHolderGrowth * run.holder0, "Hoelder " + num(run.holder0) + " -> " + num(holder));

  solver::SimParams params;
  params.mu = 1e-3;
  const auto start = run.traj.state(run.traj.times.size() - 1);
  std::vector<double> residual;
  for (double h : {0.02, 0.01}) {
    const auto s1 = solver::advance(start, params, h);
    const auto s2 = solver::advance(s1, params, h);
    residual.push_back(solver::gamma_residual({start, s1, s2}, params.mu).relative);
  }
  out.require(residual[0] <= kGammaResidual, "Gamma residual " + num(residual[0]));
  out.require(residual[0] >= kGammaReduction * residual[1], "halving x" + num(residual[0] / residual[1]));
  return out;
}

// ------------------------------------------------------- patch regularity

Outcome patch_regularity() {
  Outcome out;
  const init::PatchSpec disc;
  const double norm = init::patch_area(disc) + init::patch_perimeter(disc);
  for (double p : {1.0, 2.0, 4.0}) {
    std::vector<double> values;
    for (int n : {256, 512}) {
      const GridSpec g(n, 8.0);
      const lp::DyadicPartition part(g);
      const auto f = init::rasterize_patch(disc, g);
      values.push_back(lp::combine_ladder(lp::besov_ladder(f, {1.0 / p, p, kInf, true}, part), kInf) / norm);
    }
    const bool finite = std::isfinite(values[0]) && std::isfinite(values[1]);
    out.require(finite && values[0] <= kPatchBound && values[1] <= kPatchBound,
                "p=" + num(p) + " " + num(values[0]) + "/" + num(values[1]));
    out.require(std::abs(values[1] / values[0] - 1.0) <= kPatchStability, "stable");
  }
  return out;
}

// ------------------------------------------------------------- determinism

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome out;
  auto j = nlohmann::json::parse(R"({
    "grid": {"n": 64, "half_length": 2.0},
    "patch": {"kind": "ellipse", "semi_axes": [1.0, 0.7]},
    "density": {"kind": "gaussian", "amplitude": 1.0, "width": 0.25},
    "sweep": {"mu_ladder": [1e-4, 3e-4, 1e-3, 3e-3, 1e-2], "p_list": [1, 2, 4], "sample_times": [0.25, 0.5]}
  })");
  const auto root = std::filesystem::temp_directory_path() / "strato-acceptance-determinism";
  std::filesystem::remove_all(root);
  std::vector<std::string> csv;
  for (int workers : {1, 3}) {
    j["sweep"]["workers"] = workers;
    const auto [report, manifest] = harness::run_sweep(harness::parse_config(j));
    const auto dir = root / ("w" + std::to_string(workers));
    harness::emit_report(report, manifest, dir);
    csv.push_back(slurp(dir / "rates.csv"));
  }
  std::filesystem::remove_all(root);
  out.require(!csv[0].empty() && csv[0] == csv[1], "rates.csv " + std::to_string(csv[0].size()) + " bytes, workers 1 vs 3");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  // optional arguments select a subset of criteria
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  auto wanted = [&](int k) { return selected.empty() || std::find(selected.begin(), selected.end(), k) != selected.end(); };

  int failures = 0, ran = 0;
  auto report = [&](int k, const std::function<Outcome()>& criterion) {
    if (!wanted(k)) return;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criterion();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failures;
    std::printf("CRITERION %d: %s  %s  (%.1fs)\n", k, out.pass ? "PASS" : "FAIL", out.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  };

  report(1, oracle_vorticity_rate);
  report(2, oracle_velocity_rate);
  report(3, solver_vs_oracle);
  report(4, full_system_rate);
  report(5, littlewood_paley_suite);
  report(6, heat_smoothing);
  std::optional<BuoyantEllipse> run;
  std::string run_error;
  if (wanted(7) || wanted(8)) {
    try {
      run = buoyant_ellipse();
    } catch (const std::exception& e) {
      run_error = e.what();
    }
  }
  auto with_run = [&](Outcome (*check)(const BuoyantEllipse&)) {
    return [&, check] {
      if (!run) throw std::runtime_error("buoyant ellipse run failed: " + run_error);
      return check(*run);
    };
  };
  report(7, with_run(dynamics_invariants));
  report(8, with_run(conormal_suite));
  report(9, patch_regularity);
  report(10, determinism);
  std::printf("%d of %d criteria failed\n", failures, ran);
  return failures == 0 ? 0 : 1;
}
