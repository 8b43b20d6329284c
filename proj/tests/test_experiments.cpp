#include "ionjc/errors.hpp"
#include "ionjc/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ionjc;

namespace {

std::string csv(const Table& t, const std::string& stamp = "") {
  std::ostringstream out;
  write_csv(out, t, stamp);
  return out.str();
}

double num(const Cell& c) { return std::get<double>(c); }

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

const char* kEvolveConfig = R"({
  "experiment": "evolve",
  "units": "nu1",
  "chain": {"ions": 1, "lamb_dicke": 0.1},
  "drives": [{"ion": 1, "rabi": 0.3, "detuning": 0.9}],
  "hilbert": {"n_max": 20, "guard": 5},
  "evolve": {
    "method": "rwa_jc",
    "range": {"start": 0, "stop": 30, "points": 7},
    "resonant_pairs": [[1, 1]],
    "initial_state": {"modes": [1], "spins": ["g"]}
  }
})";

}  // namespace

TEST_CASE("config round trip") {
  const ExperimentConfig a = parse_config(kEvolveConfig);
  CHECK(a.times.size() == 7);
  CHECK(a.times.back() == 30.0);
  CHECK(a.method == Method::rwa_jc);
  CHECK(a.resonant_pairs == std::vector<ResonantPair>{{1, 1}});
  const ExperimentConfig b = parse_config(serialize_config(a));
  CHECK(a == b);
  CHECK(serialize_config(a) == serialize_config(b));

  const ExperimentConfig sweep = parse_config(R"({"experiment": "sweep-rabi", "chain": {"ions": 1},
    "drives": [{"ion": 1, "rabi": 0.1, "detuning": 1.0}]})");
  CHECK(sweep.sweep_grid == default_sweep_grid());
  CHECK(parse_config(serialize_config(sweep)) == sweep);

  const ExperimentConfig phys = parse_config(R"({"experiment": "modes", "units": "physical",
    "chain": {"ions": 2, "nu1": 6.283185307179586e6, "mass_amu": 40},
    "drives": [{"ion": 2, "rabi": 1e5, "omega_l": 1e15, "k_l": 8.6e6, "phase": 0.5}]})");
  CHECK(parse_config(serialize_config(phys)) == phys);
}

TEST_CASE("default grid and truncation") {
  const auto grid = default_sweep_grid();
  REQUIRE(grid.size() == 25);
  CHECK(grid.front() == 1e-2);
  CHECK(grid.back() == 10.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  ExperimentConfig c;
  CHECK(c.effective_n_max() == 40);
  CHECK(c.effective_guard() == 10);
  c.ions = 2;
  CHECK(c.effective_n_max() == 12);
  CHECK(c.effective_guard() == 4);
}

TEST_CASE("config errors carry line numbers") {
  const std::string too_many = "{\n  \"experiment\": \"modes\",\n  \"chain\": {\n    \"ions\": 11\n  }\n}";
  CHECK(error_line(too_many) == 4);
  try {
    parse_config(too_many);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("N exceeds supported range") != std::string::npos);
  }
  CHECK(error_line("{\n  \"experiment\": \"modes\",\n  \"chain\": {\"ions\": 1},\n  \"colour\": 3\n}") == 4);
  CHECK(error_line("{\n  \"experiment\": \"modes\",\n  \"chain\": {\"ions\": 1\n  ,,\n}") == 4);
  const std::string empty_grid = R"({"experiment": "sweep-rabi", "chain": {"ions": 1},
    "drives": [{"ion": 1, "rabi": 0.1, "detuning": 1.0}],
    "sweep": {"grid": []}})";
  CHECK(error_line(empty_grid) == 3);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "sweep-rabi", "chain": {"ions": 1},
    "drives": [{"ion": 1, "rabi": 0.1, "detuning": 1.0}], "sweep": {"grid": [0.5, 0.2]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "evolve", "chain": {"ions": 1},
    "drives": [{"ion": 1, "rabi": 0.1, "detuning": 1.0}], "evolve": {"times": [1], "method": "pipeline_rwa"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "resonance", "chain": {"ions": 2},
    "drives": [{"ion": 3, "rabi": 0.1, "detuning": 1.0}]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "modes", "chain": {"ions": 1}})", "evolve"), ConfigError);
  CHECK(parse_config(R"({"chain": {"ions": 1}})", "modes").experiment == "modes");
}

TEST_CASE("modes table") {
  ExperimentConfig c = parse_config(R"({"experiment": "modes", "chain": {"ions": 2, "lamb_dicke": 0.1},
    "drives": [{"ion": 1, "rabi": 0.1, "detuning": 1.0}]})");
  const Table t = cmd_modes(c);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.columns == std::vector<std::string>{"mode", "nu", "M_ion1", "M_ion2", "eta_drive1"});
  CHECK(std::abs(num(t.rows[0][1]) - 1.0) < 1e-12);
  CHECK(std::abs(num(t.rows[1][1]) - std::sqrt(3.0)) < 1e-12);
  CHECK(std::abs(num(t.rows[0][4]) - 0.1 / std::sqrt(2.0)) < 1e-14);

  c = parse_config(R"({"experiment": "modes", "chain": {"ions": 1}})");
  const Table one = cmd_modes(c);
  REQUIRE(one.rows.size() == 1);
  CHECK(num(one.rows[0][2]) == 1.0);
}

TEST_CASE("resonance table") {
  auto run = [](double rabi) {
    const std::string text = R"({"experiment": "resonance", "chain": {"ions": 1},
      "drives": [{"ion": 1, "rabi": )" + format_double(rabi) + R"(, "detuning": 0.5}]})";
    return cmd_resonance(parse_config(text));
  };
  CHECK(std::abs(num(run(0.25).rows[0][9]) - 0.86603) < 1e-5);
  CHECK(std::get<std::string>(run(0.6).rows[0][9]) == "unreachable");
  CHECK(num(run(0.0).rows[0][9]) == 1.0);
}

TEST_CASE("sweep rows are in grid order and thread-count independent") {
  const std::string text = R"({"experiment": "sweep-rabi", "chain": {"ions": 1, "lamb_dicke": 0.05},
    "drives": [{"ion": 1, "rabi": 0.1, "detuning": 1.0}],
    "hilbert": {"n_max": 24, "guard": 6},
    "sweep": {"grid": [0.01, 0.3, 2.0]}})";
  const ExperimentConfig c = parse_config(text);
  const Table one = cmd_sweep_rabi(c, 1);
  const Table three = cmd_sweep_rabi(c, 3);
  CHECK(csv(one) == csv(three));
  REQUIRE(one.rows.size() == 3);
  CHECK(num(one.rows[0][0]) == 0.01);
  // weak field: both RWAs small and within 10x of each other
  const double p0 = num(one.rows[0][5]);
  const double s0 = num(one.rows[0][6]);
  CHECK(p0 < 0.05);
  CHECK(s0 < 0.05);
  CHECK(std::max(p0, s0) / std::min(p0, s0) < 10.0);
  // strong field: the standard RWA is worse
  CHECK(num(one.rows[2][6]) > num(one.rows[2][5]));
  CHECK(std::get<std::int64_t>(one.rows[2][8]) == 0);
  CHECK(std::get<std::int64_t>(one.rows[1][8]) == 1);
  CHECK(num(one.rows[1][7]) < 1e-14);
}

TEST_CASE("evolve: stationary ground state and single-phonon oscillation") {
  ExperimentConfig c = parse_config(kEvolveConfig);
  Table t = cmd_evolve(c);
  REQUIRE(t.rows.size() == 7);
  const ModelSpec m = build_model(c);
  const BalancedParams p = m.balanced()[0];
  const double g = p.coupling[0];
  for (const auto& row : t.rows) {
    const double time = num(row[0]);
    CHECK(std::abs(num(row[1]) - std::pow(std::sin(g * time), 2)) < 1e-10);
    CHECK(std::abs(num(row[4]) - 1.0) < 1e-12);
  }

  c.initial_modes = {ModeState{0, std::nullopt}};
  t = cmd_evolve(c);
  for (const auto& row : t.rows) {
    CHECK(num(row[1]) == 0.0);
    CHECK(num(row[2]) == 0.0);
    CHECK(std::abs(num(row[3]) - 1.0) < 1e-14);
  }
}

TEST_CASE("evolve: coherent state under the exact pipeline") {
  ExperimentConfig c = parse_config(kEvolveConfig);
  c.n_max = 40;
  c.guard = 10;
  c.method = Method::pipeline_exact;
  c.initial_modes = {ModeState{0, Complex(2.0, 0.0)}};
  const Table t = cmd_evolve(c);
  for (const auto& row : t.rows) {
    CHECK(num(row[1]) >= 0.0);
    CHECK(num(row[1]) <= 1.0 + 1e-12);
    CHECK(std::abs(num(row[4]) - 1.0) < 1e-10);
  }
  CHECK(std::abs(num(t.rows[0][2]) - 4.0) < 1e-6);

  c.initial_modes = {ModeState{0, Complex(4.0, 0.0)}};
  c.n_max = 20;
  c.guard = 5;
  CHECK_THROWS_AS(cmd_evolve(c), ConfigError);
}

TEST_CASE("CSV output") {
  Table t;
  t.title = "ionjc test";
  t.columns = {"a", "b", "c"};
  t.rows.push_back({0.1, std::int64_t{3}, std::string("x,y")});
  t.rows.push_back({1.0 / 3.0, std::int64_t{-1}, std::string("unreachable")});
  const std::string text = csv(t, "2026-01-01T00:00:00Z");
  CHECK(text == "# ionjc test\n# generated 2026-01-01T00:00:00Z\na,b,c\n0.1,3,\"x,y\"\n0.3333333333333333,-1,unreachable\n");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(1e-300) == "1e-300");

  std::ostringstream json;
  write_json(json, t, "");
  CHECK(json.str().find("\"unreachable\"") != std::string::npos);
}
