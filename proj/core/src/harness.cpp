#include "strato/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include "strato/field_io.hpp"
#include "strato/spectral.hpp"

#ifndef STRATO_VERSION
#define STRATO_VERSION "unknown"
#endif

namespace strato::harness {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T value_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::array<double, 2> point_or(const json& j, const char* key, std::array<double, 2> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 2) throw ConfigError(std::string("'") + key + "' must be a two-element array");
  return {a[0].get<double>(), a[1].get<double>()};
}

struct RunOutput {
  double mu = 0.0;
  bool ok = false;
  std::string error;
  double wall = 0.0;
  std::optional<solver::Trajectory> traj;
};

RunOutput execute(const SweepConfig& config, const solver::SimState& init, double mu) {
  RunOutput out;
  out.mu = mu;
  const auto start = std::chrono::steady_clock::now();
  try {
    solver::SimParams params = config.params;
    params.mu = mu;
    params.horizon = *std::max_element(config.sample_times.begin(), config.sample_times.end());
    out.traj = solver::run(init, params, config.sample_times);
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

double quantity_norm(Quantity q, const ScalarField& omega, const ScalarField& rho, double p) {
  switch (q) {
    case Quantity::vorticity: return spectral::lp_norm(omega, p);
    case Quantity::velocity: return spectral::lp_norm(spectral::biot_savart(omega), p);
    case Quantity::density: return spectral::lp_norm(rho, p);
    case Quantity::pi:
      return spectral::lp_norm(spectral::biot_savart(omega), p) + spectral::lp_norm(rho, p);
  }
  return 0.0;
}

}  // namespace

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::vorticity: return "vorticity";
    case Quantity::velocity: return "velocity";
    case Quantity::density: return "density";
    case Quantity::pi: return "pi";
  }
  return "?";
}

Quantity parse_quantity(const std::string& name) {
  if (name == "vorticity") return Quantity::vorticity;
  if (name == "velocity") return Quantity::velocity;
  if (name == "density") return Quantity::density;
  if (name == "pi") return Quantity::pi;
  throw ConfigError("unknown quantity '" + name + "'");
}

double theoretical_exponent(Quantity q, double p) {
  return q == Quantity::vorticity ? 1.0 / (2.0 * p) : 0.5 + 1.0 / (2.0 * p);
}

// ------------------------------------------------------------------- config

void SweepConfig::validate() const {
  params.validate();
  if (supersample < 1) throw ConfigError("patch.supersample must be >= 1");
  if (sample_times.empty()) throw ConfigError("sweep.sample_times must not be empty");
  for (double t : sample_times) {
    if (!(t > 0.0)) throw ConfigError("sweep.sample_times must be positive");
  }
  if (!std::is_sorted(sample_times.begin(), sample_times.end())) throw ConfigError("sweep.sample_times must increase");
  for (double mu : mu_ladder) {
    if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("sweep.mu_ladder entries must lie in (0, 1)");
    for (double t : sample_times) {
      if (mu * t > 1.0) throw ConfigError("sweep: mu t must stay <= 1");
    }
  }
  for (double p : p_list) {
    if (!(p >= 1.0)) throw ConfigError("sweep.p_list entries must be >= 1");
  }
  if (quantities.empty()) throw ConfigError("sweep.quantities must not be empty");
  if (workers < 0) throw ConfigError("sweep.workers must be >= 0");
}

solver::SimParams parse_params(const json& j, solver::SimParams base) {
  base.mu = value_or(j, "mu", base.mu);
  base.kappa = value_or(j, "kappa", base.kappa);
  base.dt = value_or(j, "dt", base.dt);
  base.horizon = value_or(j, "horizon", base.horizon);
  base.cfl_cap = value_or(j, "cfl_cap", base.cfl_cap);
  base.dealias = value_or(j, "dealias", base.dealias);
  base.grad_rho_p = value_or(j, "grad_rho_p", base.grad_rho_p);
  return base;
}

init::PatchSpec parse_patch(const json& j) {
  init::PatchSpec p;
  p.kind = init::parse_patch_kind(value_or<std::string>(j, "kind", "disc"));
  p.center = point_or(j, "center", p.center);
  p.radius = value_or(j, "radius", p.radius);
  const auto axes = point_or(j, "semi_axes", {p.semi_axis_1, p.semi_axis_2});
  p.semi_axis_1 = axes[0];
  p.semi_axis_2 = axes[1];
  p.amplitude = value_or(j, "amplitude", p.amplitude);
  p.mode = value_or(j, "mode", p.mode);
  p.octaves = value_or(j, "octaves", p.octaves);
  p.epsilon = value_or(j, "epsilon", p.epsilon);
  try {
    p.validate();
  } catch (const init::InitError& e) {
    throw ConfigError(std::string("patch: ") + e.what());
  }
  return p;
}

init::DensitySpec parse_density(const json& j) {
  init::DensitySpec d;
  d.kind = init::parse_density_kind(value_or<std::string>(j, "kind", "constant"));
  d.amplitude = value_or(j, "amplitude", d.amplitude);
  d.width = value_or(j, "width", d.width);
  d.center = point_or(j, "center", d.center);
  return d;
}

json to_json(const init::PatchSpec& p) {
  return {{"kind", init::to_string(p.kind)}, {"center", p.center},     {"radius", p.radius},
          {"semi_axes", {p.semi_axis_1, p.semi_axis_2}}, {"amplitude", p.amplitude}, {"mode", p.mode},
          {"octaves", p.octaves},           {"epsilon", p.epsilon}};
}

json to_json(const init::DensitySpec& d) {
  return {{"kind", init::to_string(d.kind)}, {"amplitude", d.amplitude}, {"width", d.width}, {"center", d.center}};
}

json to_json(const solver::SimParams& p) {
  return {{"mu", p.mu},           {"kappa", p.kappa},     {"dt", p.dt},
          {"horizon", p.horizon}, {"cfl_cap", p.cfl_cap}, {"dealias", p.dealias},
          {"grad_rho_p", p.grad_rho_p}};
}

SweepConfig parse_config(const json& j) {
  try {
    SweepConfig c;
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      c.grid = GridSpec(value_or(g, "n", 256), value_or(g, "half_length", 8.0));
    }
    if (j.contains("patch")) {
      c.patch = parse_patch(j.at("patch"));
      c.supersample = value_or(j.at("patch"), "supersample", c.supersample);
    }
    if (j.contains("density")) c.density = parse_density(j.at("density"));
    if (j.contains("params")) c.params = parse_params(j.at("params"), c.params);
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      c.mu_ladder = value_or(s, "mu_ladder", c.mu_ladder);
      c.p_list = value_or(s, "p_list", c.p_list);
      c.sample_times = value_or(s, "sample_times", c.sample_times);
      if (s.contains("quantities")) {
        c.quantities.clear();
        for (const auto& q : s.at("quantities")) c.quantities.push_back(parse_quantity(q.get<std::string>()));
      }
      c.seeds = value_or(s, "seeds", c.seeds);
      c.slope_tolerance = value_or(s, "slope_tolerance", c.slope_tolerance);
      c.max_stderr = value_or(s, "max_stderr", c.max_stderr);
      c.min_fit_points = value_or(s, "min_fit_points", c.min_fit_points);
      c.min_fit_decades = value_or(s, "min_fit_decades", c.min_fit_decades);
      c.workers = value_or(s, "workers", c.workers);
    }
    if (j.contains("output")) c.output_dir = value_or<std::string>(j.at("output"), "dir", c.output_dir.string());
    if (!c.sample_times.empty()) c.params.horizon = *std::max_element(c.sample_times.begin(), c.sample_times.end());
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const init::InitError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError(std::string("config: ") + e.what());
  }
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path.string() + ": cannot open");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const SweepConfig& c) {
  json quantities = json::array();
  for (auto q : c.quantities) quantities.push_back(to_string(q));
  json patch = to_json(c.patch);
  patch["supersample"] = c.supersample;
  return {{"grid", {{"n", c.grid.n()}, {"half_length", c.grid.half_length()}}},
          {"patch", patch},
          {"density", to_json(c.density)},
          {"params", to_json(c.params)},
          {"sweep",
           {{"mu_ladder", c.mu_ladder},
            {"p_list", c.p_list},
            {"sample_times", c.sample_times},
            {"quantities", quantities},
            {"seeds", c.seeds},
            {"slope_tolerance", c.slope_tolerance},
            {"max_stderr", c.max_stderr},
            {"min_fit_points", c.min_fit_points},
            {"min_fit_decades", c.min_fit_decades}}},
          {"output", {{"dir", c.output_dir.string()}}}};
}

// ---------------------------------------------------------------- utilities

int default_workers() {
  if (const char* env = std::getenv("STRATO_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string code_version() { return STRATO_VERSION; }

std::vector<ErrorEntry> compare_fields(const ScalarField& a, const ScalarField& b, const std::vector<double>& p_list,
                                       bool velocity_mode) {
  require_same_grid(a.grid(), b.grid(), "compare_fields");
  const ScalarField diff = a - b;
  std::vector<ErrorEntry> out;
  if (velocity_mode) {
    const auto v = spectral::biot_savart(diff);
    for (double p : p_list) out.push_back({p, spectral::lp_norm(v, p)});
  } else {
    for (double p : p_list) out.push_back({p, spectral::lp_norm(diff, p)});
  }
  return out;
}

// -------------------------------------------------------------------- sweep

std::vector<SlopeEntry> fit_rows(const std::vector<RateRow>& rows, const fit::FitOptions& options,
                                 double slope_tolerance, double max_stderr) {
  std::map<std::tuple<int, double, double>, std::vector<fit::RatePoint>> groups;
  for (const auto& r : rows) {
    auto& g = groups[{static_cast<int>(r.quantity), r.p, r.t}];
    if (!r.below_resolution && r.error > 0.0) g.push_back({r.mu * r.t, r.error});
  }
  std::vector<SlopeEntry> out;
  for (auto& [key, points] : groups) {
    SlopeEntry e;
    e.quantity = static_cast<Quantity>(std::get<0>(key));
    e.p = std::get<1>(key);
    e.t = std::get<2>(key);
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.mu_t < b.mu_t; });
    try {
      e.fit = fit::fit_exponent(points, theoretical_exponent(e.quantity, e.p), options);
      e.flagged = e.fit->stderr_slope > max_stderr;
      const bool sane = e.fit->slope > 0.0 && e.fit->slope < 1.5;
      e.pass = sane && !e.flagged && std::abs(e.fit->slope - e.fit->theoretical) <= slope_tolerance;
    } catch (const fit::FitError& err) {
      e.failure = err.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::pair<RateReport, RunManifest> run_sweep(const SweepConfig& config) {
  config.validate();
  const solver::SimState init{init::rasterize_patch(config.patch, config.grid, config.supersample),
                              init::make_density(config.density, config.grid).rho, 0.0};

  std::vector<double> mus{0.0};
  mus.insert(mus.end(), config.mu_ladder.begin(), config.mu_ladder.end());
  std::vector<RunOutput> results(mus.size());
  const int workers = std::max(1, std::min<int>(config.workers > 0 ? config.workers : default_workers(),
                                                static_cast<int>(mus.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < mus.size(); k = next++) results[k] = execute(config, init, mus[k]);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  RunManifest manifest;
  manifest.config_hash = fnv1a_hex(to_json(config).dump());
  manifest.code_version = code_version();
  manifest.workers = workers;
  for (const auto& r : results) {
    RunRecord rec{r.mu, r.ok, r.error, r.wall, 0, 0.0, 0.0};
    if (r.traj && !r.traj->dt_history.empty()) {
      rec.steps = r.traj->steps;
      rec.dt_min = *std::min_element(r.traj->dt_history.begin(), r.traj->dt_history.end());
      rec.dt_max = *std::max_element(r.traj->dt_history.begin(), r.traj->dt_history.end());
    }
    manifest.runs.push_back(rec);
  }

  RateReport report;
  const RunOutput& ref = results.front();
  if (ref.ok) {
    for (std::size_t k = 1; k < results.size(); ++k) {
      const RunOutput& run = results[k];
      if (!run.ok) continue;
      for (std::size_t ti = 0; ti < config.sample_times.size(); ++ti) {
        const ScalarField dw = run.traj->omega[ti] - ref.traj->omega[ti];
        const ScalarField dr = run.traj->rho[ti] - ref.traj->rho[ti];
        const auto dv = spectral::biot_savart(dw);
        for (double p : config.p_list) {
          const double ew = spectral::lp_norm(dw, p);
          const double ev = spectral::lp_norm(dv, p);
          const double er = spectral::lp_norm(dr, p);
          for (Quantity q : config.quantities) {
            double err = 0.0;
            switch (q) {
              case Quantity::vorticity: err = ew; break;
              case Quantity::velocity: err = ev; break;
              case Quantity::density: err = er; break;
              case Quantity::pi: err = ev + er; break;
            }
            const double scale = quantity_norm(q, ref.traj->omega[ti], ref.traj->rho[ti], p);
            const bool below = err <= 1e-12 * std::max(1.0, scale);
            report.rows.push_back({q, p, run.mu, config.sample_times[ti], err, below});
          }
        }
      }
    }
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const RateRow& a, const RateRow& b) {
    return std::make_tuple(static_cast<int>(a.quantity), a.p, a.mu, a.t) <
           std::make_tuple(static_cast<int>(b.quantity), b.p, b.mu, b.t);
  });
  report.slopes = fit_rows(report.rows, {config.min_fit_points, config.min_fit_decades}, config.slope_tolerance,
                           config.max_stderr);
  return {std::move(report), std::move(manifest)};
}

// ------------------------------------------------------------------- output

json to_json(const std::vector<SlopeEntry>& slopes) {
  json out = json::array();
  for (const auto& s : slopes) {
    json e{{"quantity", to_string(s.quantity)},
           {"p", s.p},
           {"t", s.t},
           {"theoretical", theoretical_exponent(s.quantity, s.p)},
           {"pass", s.pass},
           {"flagged", s.flagged}};
    if (s.fit) {
      e["slope"] = s.fit->slope;
      e["stderr"] = s.fit->stderr_slope;
      e["c1"] = s.fit->c1;
      e["c2"] = s.fit->c2;
    } else {
      e["slope"] = nullptr;
      e["stderr"] = nullptr;
      e["failure"] = s.failure;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::string> emit_report(const RateReport& report, RunManifest manifest, const std::filesystem::path& dir) {
  {
    auto os = io::open_output(dir / "rates.csv");
    os << "quantity,p,mu,t,mu_t,error,below_resolution\n";
    for (const auto& r : report.rows) {
      os << to_string(r.quantity) << ',' << fmt(r.p) << ',' << fmt(r.mu) << ',' << fmt(r.t) << ',' << fmt(r.mu * r.t)
         << ',' << fmt(r.error) << ',' << (r.below_resolution ? 1 : 0) << '\n';
    }
    if (!os) throw io::IoError((dir / "rates.csv").string() + ": write failed");
  }
  {
    const json slopes = to_json(report.slopes);
    auto os = io::open_output(dir / "slopes.json");
    os << slopes.dump(2) << '\n';
    if (!os) throw io::IoError((dir / "slopes.json").string() + ": write failed");
  }
  manifest.files = {"rates.csv", "slopes.json", "manifest.json"};
  {
    json runs = json::array();
    for (const auto& r : manifest.runs) {
      runs.push_back({{"mu", r.mu},
                      {"ok", r.ok},
                      {"error", r.error},
                      {"wall_seconds", r.wall_seconds},
                      {"steps", r.steps},
                      {"dt_min", r.dt_min},
                      {"dt_max", r.dt_max}});
    }
    json m{{"config_hash", manifest.config_hash},
           {"code_version", manifest.code_version},
           {"workers", manifest.workers},
           {"runs", runs},
           {"files", manifest.files},
           {"note", "only exponents in mu t at fixed t are checked; the growth prefactor in t is not verified"}};
    auto os = io::open_output(dir / "manifest.json");
    os << m.dump(2) << '\n';
    if (!os) throw io::IoError((dir / "manifest.json").string() + ": write failed");
  }
  return manifest.files;
}

std::vector<RateRow> read_rates_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw io::IoError(path.string() + ": cannot open");
  std::string line;
  if (!std::getline(is, line) || line.rfind("quantity,p,mu,t", 0) != 0) {
    throw io::IoError(path.string() + ": missing rates.csv header");
  }
  std::vector<RateRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 6) throw io::IoError(path.string() + ":" + std::to_string(lineno) + ": too few columns");
    try {
      RateRow r{parse_quantity(cells[0]), std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3]),
                std::stod(cells[5]), cells.size() > 6 && cells[6] == "1"};
      rows.push_back(r);
    } catch (const std::exception& e) {
      throw io::IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace strato::harness
