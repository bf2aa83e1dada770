#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "strato/conormal.hpp"
#include "strato/field_io.hpp"
#include "strato/fit.hpp"
#include "strato/harness.hpp"
#include "strato/initdata.hpp"
#include "strato/littlewood_paley.hpp"
#include "strato/rankine.hpp"
#include "strato/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace strato;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

void write_text(const fs::path& path, const std::string& text) {
  auto os = io::open_output(path);
  os << text;
  if (!os) throw io::IoError(path.string() + ": write failed");
}

template <class F>
void parallel_for(std::size_t count, int workers, F&& body) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) body(i);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers && static_cast<std::size_t>(w) < count; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  std::string out;
  int workers = -1;
  bool strict = false;
};

int cmd_sweep(const SweepArgs& a) {
  auto config = harness::load_config(a.config);
  if (!a.out.empty()) config.output_dir = a.out;
  if (a.workers >= 0) config.workers = a.workers;
  config.validate();
  const auto [report, manifest] = harness::run_sweep(config);
  harness::emit_report(report, manifest, config.output_dir);
  bool all_pass = true;
  for (const auto& r : manifest.runs) {
    if (!r.ok) std::cerr << "run mu=" << r.mu << " failed: " << r.error << '\n';
  }
  for (const auto& s : report.slopes) {
    all_pass = all_pass && s.pass;
    std::cout << harness::to_string(s.quantity) << " p=" << s.p << " t=" << s.t << ": ";
    if (s.fit) {
      std::cout << "slope " << s.fit->slope << " +- " << s.fit->stderr_slope << " (theory "
                << harness::theoretical_exponent(s.quantity, s.p) << ") " << (s.pass ? "PASS" : "FAIL")
                << (s.flagged ? " flagged" : "") << '\n';
    } else {
      std::cout << "no fit: " << s.failure << '\n';
    }
  }
  std::cout << "wrote " << config.output_dir.string() << '\n';
  return a.strict && !all_pass ? 2 : 0;
}

// ------------------------------------------------------------------ rankine

struct RankineArgs {
  std::vector<double> p{2.0};
  double tau_min = 1e-4;
  double tau_max = 1e-1;
  int points = 8;
  std::string quantity = "vorticity";
  std::string out = "rankine-out";
};

int cmd_rankine(const RankineArgs& a) {
  const bool velocity = a.quantity == "velocity";
  if (!velocity && a.quantity != "vorticity") throw std::invalid_argument("--quantity must be vorticity or velocity");
  const auto taus = rankine::log_ladder(a.tau_min, a.tau_max, a.points);
  std::vector<rankine::RadialProfile> profiles;
  for (double tau : taus) profiles.push_back(rankine::radial_profile(tau));

  std::ostringstream csv;
  csv << "p,tau,error\n";
  json rates = json::array();
  for (double p : a.p) {
    std::vector<fit::RatePoint> pts;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const double e = velocity ? rankine::velocity_lp_error(profiles[i], p) : rankine::vorticity_lp_error(profiles[i], p);
      pts.push_back({taus[i], e});
      csv << fmt(p) << ',' << fmt(taus[i]) << ',' << fmt(e) << '\n';
    }
    const double theo = velocity ? 0.5 + 0.5 / p : 0.5 / p;
    json entry{{"p", p}, {"theoretical", theo}};
    try {
      const auto f = fit::fit_exponent(pts, theo, {std::min(a.points, 6), 1.0});
      entry.update({{"slope", f.slope}, {"stderr", f.stderr_slope}, {"c1", f.c1}, {"c2", f.c2}});
      std::cout << a.quantity << " p=" << p << ": slope " << f.slope << " (theory " << theo << ")\n";
    } catch (const fit::FitError& e) {
      entry["failure"] = e.what();
      std::cout << a.quantity << " p=" << p << ": no fit: " << e.what() << '\n';
    }
    rates.push_back(std::move(entry));
  }
  const fs::path dir(a.out);
  write_text(dir / ("rankine_" + a.quantity + ".csv"), csv.str());
  write_text(dir / ("rankine_" + a.quantity + ".json"), rates.dump(2) + "\n");
  return 0;
}

// ----------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::string out;
  int tracers = 256;
  bool no_family = false;
};

std::string snapshot_name(const std::string& stem, std::size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu.slf", stem.c_str(), k);
  return buf;
}

void write_boundary(const fs::path& path, const std::vector<std::array<double, 2>>& points) {
  std::ostringstream os;
  os << "x1,x2\n";
  for (const auto& p : points) os << fmt(p[0]) << ',' << fmt(p[1]) << '\n';
  write_text(path, os.str());
}

int cmd_simulate(const SimulateArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto config = harness::load_config(a.config);
  const fs::path dir = a.out.empty() ? config.output_dir : fs::path(a.out);
  const auto& grid = config.grid;
  const auto w0 = init::rasterize_patch(config.patch, grid, config.supersample);
  const auto rho0 = init::make_density(config.density, grid).rho;

  std::optional<conormal::VectorFieldFamily> family;
  std::optional<conormal::FlowBoundary> boundary;
  std::string family_note;
  if (!a.no_family) {
    try {
      family = conormal::make_family(init::initial_vector_family(config.patch, grid, a.tracers));
      boundary = conormal::make_flow_boundary(init::boundary_curve(config.patch, a.tracers));
    } catch (const init::InitError& e) {
      family_note = e.what();
      std::cerr << "family disabled: " << family_note << '\n';
    }
  }

  json snapshots = json::array();
  auto save = [&](std::size_t k, const ScalarField& omega, const ScalarField& rho, double t, double v) {
    json s{{"index", k}, {"t", t}, {"V", v}, {"omega", snapshot_name("omega", k)}, {"rho", snapshot_name("rho", k)}};
    io::write_field(dir / s["omega"].get<std::string>(), omega);
    io::write_field(dir / s["rho"].get<std::string>(), rho);
    snapshots.push_back(std::move(s));
  };
  std::vector<json> family_files;
  auto save_family = [&](std::size_t k) {
    json members = json::array();
    for (std::size_t l = 0; l < family->members.size(); ++l) {
      const std::string stem = "family" + std::to_string(l);
      json m{{"u1", snapshot_name(stem + "_u1", k)}, {"u2", snapshot_name(stem + "_u2", k)},
             {"div", snapshot_name(stem + "_div", k)}};
      io::write_field(dir / m["u1"].get<std::string>(), family->members[l].u1);
      io::write_field(dir / m["u2"].get<std::string>(), family->members[l].u2);
      io::write_field(dir / m["div"].get<std::string>(), family->divergence[l]);
      members.push_back(std::move(m));
    }
    char name[64];
    std::snprintf(name, sizeof name, "boundary_%03zu.csv", k);
    write_boundary(dir / name, boundary->points);
    family_files.push_back({{"members", members}, {"boundary", name}});
  };

  save(0, w0, rho0, 0.0, 0.0);
  if (family) save_family(0);

  const auto& times = config.sample_times;
  std::size_t next_sample = 0;
  auto observer = [&](const solver::StepRecord& rec) {
    if (!family) return;
    family = conormal::advect_family(*family, rec);
    boundary = conormal::advect_boundary(*boundary, rec);
    const double t = rec.t + rec.h;
    while (next_sample < times.size() && std::abs(t - times[next_sample]) <= 1e-12 * std::max(1.0, t)) {
      save_family(++next_sample);
    }
  };

  solver::Trajectory traj;
  try {
    traj = solver::run({w0, rho0, 0.0}, config.params, times, observer);
  } catch (const solver::SolverError& e) {
    io::write_field(dir / "failure_omega.slf", e.snapshot().omega);
    io::write_field(dir / "failure_rho.slf", e.snapshot().rho);
    throw;
  }
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    save(k + 1, traj.omega[k], traj.rho[k], traj.times[k], traj.diagnostics.rows[k].v_integral);
  }
  if (family) {
    for (std::size_t k = 0; k < snapshots.size() && k < family_files.size(); ++k) snapshots[k]["family"] = family_files[k];
  }

  std::ostringstream diag;
  diag << "t,omega_l2,omega_linf,rho_l1,rho_l2,rho_linf,grad_v_linf,V,grad_rho_integral,circulation,energy,steps\n";
  for (const auto& r : traj.diagnostics.rows) {
    diag << fmt(r.t) << ',' << fmt(r.omega_l2) << ',' << fmt(r.omega_linf) << ',' << fmt(r.rho_l1) << ','
         << fmt(r.rho_l2) << ',' << fmt(r.rho_linf) << ',' << fmt(r.grad_v_linf) << ',' << fmt(r.v_integral) << ','
         << fmt(r.grad_rho_integral) << ',' << fmt(r.circulation) << ',' << fmt(r.energy) << ',' << r.steps << '\n';
  }
  write_text(dir / "diagnostics.csv", diag.str());

  const json cfg = harness::to_json(config);
  json manifest{{"code_version", harness::code_version()},
                {"config_hash", harness::fnv1a_hex(cfg.dump())},
                {"config", cfg},
                {"grid", {{"n", grid.n()}, {"half_length", grid.half_length()}}},
                {"params", harness::to_json(config.params)},
                {"steps", traj.steps},
                {"max_principle_excess", traj.diagnostics.max_principle_excess},
                {"family", family.has_value()},
                {"snapshots", snapshots},
                {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  if (!family_note.empty()) manifest["family_note"] = family_note;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << snapshots.size() << " snapshots to " << dir.string() << '\n';
  return 0;
}

// -------------------------------------------------------------------- besov

struct BesovArgs {
  std::string in;
  double s = 0.0;
  std::string p = "2";
  std::string r = "2";
  bool homogeneous = false;
};

int cmd_besov(const BesovArgs& a) {
  const auto f = io::read_field(a.in);
  const lp::DyadicPartition part(f.grid());
  const lp::BesovParams params{a.s, parse_exponent(a.p), parse_exponent(a.r), a.homogeneous};
  const auto ladder = lp::besov_ladder(f, params, part);
  std::cout << "q,weighted\n";
  for (const auto& e : ladder) std::cout << e.q << ',' << fmt(e.weighted) << '\n';
  std::cout << "norm," << fmt(lp::combine_ladder(ladder, params.r)) << '\n';
  return 0;
}

// ----------------------------------------------------------------- conormal

struct ConormalArgs {
  std::string dir;
  double epsilon = 0.5;
  std::string out;
  int workers = 0;
};

int cmd_conormal(const ConormalArgs& a) {
  const fs::path dir(a.dir);
  std::ifstream is(dir / "manifest.json");
  if (!is) throw io::IoError((dir / "manifest.json").string() + ": cannot open");
  const json manifest = json::parse(is);
  if (!manifest.value("family", false)) throw std::runtime_error(a.dir + ": simulation carries no vector family");

  std::vector<json> snaps;
  for (const auto& s : manifest.at("snapshots")) {
    if (s.contains("family")) snaps.push_back(s);
  }
  std::vector<std::string> rows(snaps.size());
  const int workers = a.workers > 0 ? a.workers : harness::default_workers();
  std::vector<std::string> errors(snaps.size());
  parallel_for(snaps.size(), workers, [&](std::size_t k) {
    try {
      const auto& s = snaps[k];
      const auto omega = io::read_field(dir / s.at("omega").get<std::string>());
      conormal::VectorFieldFamily fam;
      fam.t = s.at("t").get<double>();
      for (const auto& m : s.at("family").at("members")) {
        fam.members.push_back({io::read_field(dir / m.at("u1").get<std::string>()),
                               io::read_field(dir / m.at("u2").get<std::string>())});
        fam.divergence.push_back(io::read_field(dir / m.at("div").get<std::string>()));
      }
      std::vector<std::array<double, 2>> points;
      std::ifstream b(dir / s.at("family").at("boundary").get<std::string>());
      std::string line;
      std::getline(b, line);
      while (std::getline(b, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        points.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
      }
      const lp::DyadicPartition part(omega.grid());
      double ratio = std::numeric_limits<double>::quiet_NaN();
      if (omega.max_abs() > 0.0) ratio = conormal::log_estimate_ratio(omega, fam, a.epsilon, part);
      rows[k] = fmt(fam.t) + ',' + fmt(conormal::index(fam)) + ',' + fmt(s.at("V").get<double>()) + ',' +
                fmt(conormal::conormal_norm(omega, fam, a.epsilon, part)) + ',' +
                fmt(conormal::holder_quotient(points, a.epsilon)) + ',' + fmt(ratio) + '\n';
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }
  std::string csv = "t,index,V,conormal_norm,holder_quotient,log_ratio\n";
  for (const auto& r : rows) csv += r;
  const fs::path out = a.out.empty() ? dir / "conormal.csv" : fs::path(a.out);
  write_text(out, csv);
  std::cout << csv;
  return 0;
}

// ---------------------------------------------------------------------- fit

struct FitArgs {
  std::string in;
  std::string out;
  double tolerance = 0.1;
  double max_stderr = 0.05;
  int min_points = 5;
  double min_decades = 2.0;
};

int cmd_fit(const FitArgs& a) {
  const auto rows = harness::read_rates_csv(a.in);
  const auto slopes = harness::fit_rows(rows, {a.min_points, a.min_decades}, a.tolerance, a.max_stderr);
  const std::string text = harness::to_json(slopes).dump(2) + "\n";
  if (!a.out.empty()) write_text(a.out, text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strato: viscous Boussinesq vortex-patch experiments"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "run a viscosity sweep and fit rates");
  s->add_option("--config", sweep.config, "JSON configuration")->required()->check(CLI::ExistingFile);
  s->add_option("--out", sweep.out, "output directory (overrides output.dir)");
  s->add_option("--workers", sweep.workers, "parallel runs (overrides sweep.workers)")->check(CLI::NonNegativeNumber);
  s->add_flag("--strict", sweep.strict, "exit with status 2 when a slope check fails");

  RankineArgs rk;
  auto* r = app.add_subcommand("rankine", "rates of the heat-flowed disc oracle");
  r->add_option("--p", rk.p, "Lebesgue exponents")->delimiter(',');
  r->add_option("--tau-min", rk.tau_min)->check(CLI::PositiveNumber);
  r->add_option("--tau-max", rk.tau_max)->check(CLI::PositiveNumber);
  r->add_option("--points", rk.points)->check(CLI::Range(2, 1000));
  r->add_option("--quantity", rk.quantity)->check(CLI::IsMember({"vorticity", "velocity"}));
  r->add_option("--out", rk.out, "output directory");

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "run one simulation and write snapshots");
  m->add_option("--config", sim.config, "JSON configuration")->required()->check(CLI::ExistingFile);
  m->add_option("--out", sim.out, "output directory (overrides output.dir)");
  m->add_option("--tracers", sim.tracers, "boundary tracers")->check(CLI::Range(128, 1 << 16));
  m->add_flag("--no-family", sim.no_family, "skip the conormal vector family");

  BesovArgs bv;
  auto* b = app.add_subcommand("besov", "Besov ladder of a field snapshot");
  b->add_option("--in", bv.in, "snapshot file")->required()->check(CLI::ExistingFile);
  b->add_option("--s", bv.s, "regularity index");
  b->add_option("--p", bv.p, "integrability (number or inf)");
  b->add_option("--r", bv.r, "summability (number or inf)");
  b->add_flag("--homogeneous", bv.homogeneous, "homogeneous blocks");

  ConormalArgs cn;
  auto* c = app.add_subcommand("conormal", "conormal diagnostics of a simulation directory");
  c->add_option("--dir", cn.dir, "simulate output directory")->required()->check(CLI::ExistingDirectory);
  c->add_option("--epsilon", cn.epsilon)->check(CLI::Range(0.0, 1.0));
  c->add_option("--out", cn.out, "CSV path (default <dir>/conormal.csv)");
  c->add_option("--workers", cn.workers)->check(CLI::NonNegativeNumber);

  FitArgs ft;
  auto* f = app.add_subcommand("fit", "fit slopes of a rates.csv");
  f->add_option("--in", ft.in, "rates.csv")->required()->check(CLI::ExistingFile);
  f->add_option("--out", ft.out, "write slopes JSON here as well");
  f->add_option("--tolerance", ft.tolerance);
  f->add_option("--max-stderr", ft.max_stderr);
  f->add_option("--min-points", ft.min_points)->check(CLI::PositiveNumber);
  f->add_option("--min-decades", ft.min_decades);

  CLI11_PARSE(app, argc, argv);
  try {
    if (s->parsed()) return cmd_sweep(sweep);
    if (r->parsed()) return cmd_rankine(rk);
    if (m->parsed()) return cmd_simulate(sim);
    if (b->parsed()) return cmd_besov(bv);
    if (c->parsed()) return cmd_conormal(cn);
    if (f->parsed()) return cmd_fit(ft);
  } catch (const std::exception& e) {
    std::cerr << "strato: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
