#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "strato/field_io.hpp"
#include "strato/harness.hpp"
#include "strato/spectral.hpp"
#include "test_support.hpp"

using namespace strato;
using nlohmann::json;

namespace {
json small_sweep() {
  return json::parse(R"({
    "grid": {"n": 32, "half_length": 2.0},
    "patch": {"kind": "disc", "radius": 1.0, "supersample": 4},
    "density": {"kind": "gaussian", "amplitude": 1.0, "width": 0.25},
    "sweep": {"mu_ladder": [1e-4, 3e-4, 1e-3, 3e-3, 1e-2], "p_list": [2],
              "sample_times": [0.2], "workers": 1}
  })");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("quantities and exponents") {
  for (auto q : {harness::Quantity::vorticity, harness::Quantity::velocity, harness::Quantity::density,
                 harness::Quantity::pi}) {
    CHECK(harness::parse_quantity(harness::to_string(q)) == q);
  }
  CHECK_THROWS_AS(harness::parse_quantity("pressure"), harness::ConfigError);
  CHECK(harness::theoretical_exponent(harness::Quantity::vorticity, 2.0) == 0.25);
  CHECK(harness::theoretical_exponent(harness::Quantity::velocity, 2.0) == 0.75);
  CHECK(harness::theoretical_exponent(harness::Quantity::pi, 4.0) == 0.625);
}

TEST_CASE("config defaults and overrides") {
  const auto c = harness::parse_config(json::object());
  CHECK(c.grid.n() == 256);
  CHECK(c.grid.half_length() == 8.0);
  CHECK(c.p_list == std::vector<double>{2.0});
  CHECK(c.quantities.size() == 4);
  CHECK(c.params.horizon == 1.0);

  const auto s = harness::parse_config(small_sweep());
  CHECK(s.grid.n() == 32);
  CHECK(s.supersample == 4);
  CHECK(s.density.kind == init::DensityKind::gaussian);
  CHECK(s.mu_ladder.size() == 5);
  CHECK(s.params.horizon == doctest::Approx(0.2));

  // round trip through the serialized form keeps the hash stable
  const auto again = harness::parse_config(harness::to_json(s));
  CHECK(harness::to_json(again).dump() == harness::to_json(s).dump());
  CHECK(harness::fnv1a_hex(harness::to_json(again).dump()) == harness::fnv1a_hex(harness::to_json(s).dump()));
}

TEST_CASE("config errors") {
  auto bad = [](const char* text) { return harness::parse_config(json::parse(text)); };
  CHECK_THROWS_AS(bad(R"({"grid": {"n": 30}})"), harness::ConfigError);
  CHECK_THROWS_AS(bad(R"({"grid": {"n": "big"}})"), harness::ConfigError);
  CHECK_THROWS_AS(bad(R"({"patch": {"kind": "square"}})"), harness::ConfigError);
  CHECK_THROWS_AS(bad(R"({"sweep": {"mu_ladder": [2.0]}})"), harness::ConfigError);
  CHECK_THROWS_AS(bad(R"({"sweep": {"mu_ladder": [0.5], "sample_times": [4.0]}})"), harness::ConfigError);
  CHECK_THROWS_AS(bad(R"({"sweep": {"sample_times": [0.5, 0.2]}})"), harness::ConfigError);
  CHECK_THROWS_AS(bad(R"({"sweep": {"p_list": [0.5]}})"), harness::ConfigError);
  CHECK_THROWS_AS(bad(R"({"sweep": {"quantities": []}})"), harness::ConfigError);
  CHECK_THROWS_AS(bad(R"({"params": {"dt": -1}})"), harness::ConfigError);
  CHECK_THROWS_AS(harness::load_config("/nonexistent/strato.json"), harness::ConfigError);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(harness::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(harness::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(harness::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("worker count from the environment") {
  ::setenv("STRATO_WORKERS", "3", 1);
  CHECK(harness::default_workers() == 3);
  ::setenv("STRATO_WORKERS", "zero", 1);
  CHECK(harness::default_workers() >= 1);
  ::unsetenv("STRATO_WORKERS");
  CHECK(harness::default_workers() >= 1);
}

TEST_CASE("field comparison") {
  const GridSpec g(64, 2.0);
  const auto a = spectral::random_band_limited(g, 8.0, 3);
  for (const auto& e : harness::compare_fields(a, a, {1.0, 2.0, 4.0})) CHECK(e.error == 0.0);

  const auto shifted = a + ScalarField::sample(g, [](double, double) { return 0.5; });
  const auto errs = harness::compare_fields(shifted, a, {1.0, 2.0});
  REQUIRE(errs.size() == 2);
  for (const auto& e : errs) CHECK(e.error == doctest::Approx(0.5 * std::pow(4.0 * 4.0, 1.0 / e.p)).epsilon(1e-12));
  // constants carry no velocity
  for (const auto& e : harness::compare_fields(shifted, a, {2.0}, true)) CHECK(e.error <= 1e-12);
}

TEST_CASE("report emission and parsing") {
  const auto dir = strato::testing::scratch_dir("harness_report");
  const auto files = harness::emit_report({}, {}, dir / "empty");
  CHECK(files.size() == 3);
  CHECK(slurp(dir / "empty" / "rates.csv").rfind("quantity,p,mu,t,mu_t,error,below_resolution", 0) == 0);
  CHECK(harness::read_rates_csv(dir / "empty" / "rates.csv").empty());

  harness::RateReport report;
  report.rows = {{harness::Quantity::vorticity, 2.0, 1e-3, 1.0, 0.123456789012345678, false},
                 {harness::Quantity::pi, 4.0, 3e-4, 0.5, 1e-14, true}};
  harness::emit_report(report, {}, dir / "two");
  const auto rows = harness::read_rates_csv(dir / "two" / "rates.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error == report.rows[0].error);
  CHECK(rows[1].quantity == harness::Quantity::pi);
  CHECK(rows[1].below_resolution);

  {
    std::ofstream os(dir / "bad.csv");
    os << "a,b,c\n1,2,3\n";
  }
  CHECK_THROWS_AS(harness::read_rates_csv(dir / "bad.csv"), io::IoError);
  CHECK_THROWS_AS(harness::read_rates_csv(dir / "missing.csv"), io::IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("small sweep") {
  const auto config = harness::parse_config(small_sweep());
  const auto [report, manifest] = harness::run_sweep(config);
  CHECK(report.rows.size() == 4 * 5);
  CHECK(report.slopes.size() == 4);
  CHECK(manifest.runs.size() == 6);
  for (const auto& r : manifest.runs) {
    CHECK(r.ok);
    CHECK(r.steps > 0);
    CHECK(r.dt_min <= r.dt_max);
  }
  CHECK(manifest.config_hash == harness::fnv1a_hex(harness::to_json(config).dump()));
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    const auto& b = report.rows[i];
    CHECK((a.quantity < b.quantity || (a.quantity == b.quantity && a.mu <= b.mu)));
  }
  for (const auto& row : report.rows) {
    CHECK(row.error > 0.0);
    CHECK_FALSE(row.below_resolution);
  }
}

TEST_CASE("runs below resolution are marked and skipped by the fit") {
  auto j = small_sweep();
  j["sweep"]["mu_ladder"] = {1e-16};
  j["sweep"]["quantities"] = {"vorticity"};
  const auto [report, manifest] = harness::run_sweep(harness::parse_config(j));
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].below_resolution);
  REQUIRE(report.slopes.size() <= 1);
  for (const auto& s : report.slopes) CHECK_FALSE(s.pass);
}

TEST_CASE("fit over rows") {
  std::vector<harness::RateRow> rows;
  for (double mu : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1}) {
    rows.push_back({harness::Quantity::velocity, 2.0, mu, 1.0, 3.0 * std::pow(mu, 0.75), false});
    rows.push_back({harness::Quantity::vorticity, 2.0, mu, 1.0, std::pow(mu, 0.6), false});
  }
  const auto slopes = harness::fit_rows(rows, {5, 2.0}, 0.1, 0.05);
  REQUIRE(slopes.size() == 2);
  for (const auto& s : slopes) {
    REQUIRE(s.fit.has_value());
    if (s.quantity == harness::Quantity::velocity) {
      CHECK(s.pass);
      CHECK(s.fit->slope == doctest::Approx(0.75));
    } else {
      CHECK_FALSE(s.pass);
    }
  }
  const auto short_fit = harness::fit_rows({rows.begin(), rows.begin() + 4}, {5, 2.0}, 0.1, 0.05);
  for (const auto& s : short_fit) {
    CHECK_FALSE(s.pass);
    CHECK_FALSE(s.failure.empty());
  }
}
