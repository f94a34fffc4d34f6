#include <catch2/catch_amalgamated.hpp>

#include "qprobe/sweep.hpp"

using namespace qprobe;

namespace {

std::string emit_string(const SweepResult& r, OutputFormat fmt, bool with_metadata) {
  std::ostringstream out;
  emit(r, fmt, out, with_metadata);
  return out.str();
}

}  // namespace

TEST_CASE("grid endpoints are exact") {
  SweepConfig cfg;
  cfg.bz_min = -1.1;
  cfg.bz_max = 0.7;
  cfg.steps = 7;
  const std::vector<double> g = sweep_grid(cfg);
  REQUIRE(g.size() == 7);
  CHECK(g.front() == -1.1);
  CHECK(g.back() == 0.7);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("config validation") {
  SweepConfig cfg;
  cfg.bz_min = 1.0;
  cfg.bz_max = -1.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  cfg = SweepConfig{};
  cfg.steps = 1;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);  // min != max
  cfg.bz_min = cfg.bz_max = 0.5;
  CHECK_NOTHROW(validate(cfg));

  cfg = SweepConfig{};
  cfg.quantity = Quantity::concurrence;
  cfg.n = 3;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  cfg = SweepConfig{};
  cfg.quantity = Quantity::sensitivity;
  cfg.bx = 0.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  cfg = SweepConfig{};
  cfg.quantity = Quantity::overlap_lc;
  cfg.eps = 0.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("level-crossing sweep alternates between unity and zero") {
  SweepConfig cfg;
  cfg.quantity = Quantity::overlap_lc;
  cfg.steps = 5;
  cfg.eps = 0.2;
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.rows.size() == 5);
  const std::vector<double> expect{1, 0, 1, 0, 1};
  for (int i = 0; i < 5; ++i) {
    CHECK(r.rows[i][0] == Catch::Approx(-2.0 + i).margin(1e-15));
    CHECK(r.rows[i][1] == Catch::Approx(expect[i]).margin(1e-12));
  }
}

TEST_CASE("single-point sensitivity sweep hits the peak value") {
  SweepConfig cfg;
  cfg.quantity = Quantity::sensitivity;
  cfg.bz_min = cfg.bz_max = 1.0;
  cfg.steps = 1;
  cfg.bx = 0.1;
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0][1] == Catch::Approx(7.071067811865).margin(1e-9));
}

TEST_CASE("avoided-crossing sweep dips at the grid points nearest the critical fields") {
  SweepConfig cfg;
  cfg.quantity = Quantity::overlap_ac;
  cfg.steps = 81;
  cfg.bx = 0.1;
  cfg.eps = 0.2;
  cfg.method = Method::trotter;
  const SweepResult r = run_sweep(cfg);
  auto col = [&](int i) { return r.rows[i][1]; };
  for (int i : {20, 60}) {  // bz = -1 and +1
    CHECK(col(i) < col(i - 1));
    CHECK(col(i) < col(i + 1));
  }
  CHECK(col(0) > 0.9);
  CHECK(col(80) > 0.9);
}

TEST_CASE("compare mode reports exact, trotter and fidelity columns") {
  SweepConfig cfg;
  cfg.quantity = Quantity::overlap_ac;
  cfg.bz_min = cfg.bz_max = 1.0;
  cfg.steps = 1;
  cfg.bx = 0.1;
  cfg.eps = 0.2;
  cfg.compare = true;
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.columns == std::vector<std::string>({"bz", "L_exact", "L_trotter", "fidelity"}));
  const ProtocolRun exact{ChainSpec{2, 1.0, 0.1, 0.2, false}, 1.6, Method::exact};
  CHECK(r.rows[0][1] == Catch::Approx(overlap_avoided_point(exact)).margin(1e-12));
  CHECK(r.rows[0][3] <= 1.0);
  CHECK(r.rows[0][3] > 0.0);
}

TEST_CASE("one-row spectrum csv is byte exact") {
  SweepConfig cfg;
  cfg.quantity = Quantity::spectrum;
  cfg.bz_min = cfg.bz_max = 0.0;
  cfg.steps = 1;
  const SweepResult r = run_sweep(cfg);
  CHECK(emit_string(r, OutputFormat::csv, false) == "bz,e1,e2,e3,e4\n0,-1,-1,1,1\n");
}

TEST_CASE("json emission round-trips exactly") {
  SweepConfig cfg;
  cfg.quantity = Quantity::overlap_ac;
  cfg.steps = 9;
  cfg.bx = 0.1;
  cfg.eps = 0.2;
  const SweepResult r = run_sweep(cfg);
  const ParsedSweep p = parse_json(emit_string(r, OutputFormat::json, true));
  REQUIRE(p.columns == r.columns);
  REQUIRE(p.rows.size() == r.rows.size());
  for (std::size_t i = 0; i < p.rows.size(); ++i)
    for (std::size_t j = 0; j < p.rows[i].size(); ++j)
      CHECK(p.rows[i][j] == r.rows[i][j]);  // exact: json stores full doubles
}

TEST_CASE("csv emission round-trips to printed precision") {
  SweepConfig cfg;
  cfg.quantity = Quantity::concurrence;
  cfg.steps = 11;
  cfg.bx = 0.1;
  const SweepResult r = run_sweep(cfg);
  const ParsedSweep p = parse_csv(emit_string(r, OutputFormat::csv, true));
  REQUIRE(p.columns == r.columns);
  REQUIRE(p.rows.size() == r.rows.size());
  for (std::size_t i = 0; i < p.rows.size(); ++i)
    for (std::size_t j = 0; j < p.rows[i].size(); ++j)
      CHECK(std::abs(p.rows[i][j] - r.rows[i][j]) <
            1e-9 * std::max(1.0, std::abs(r.rows[i][j])));
}

TEST_CASE("emission without metadata is deterministic") {
  SweepConfig cfg;
  cfg.quantity = Quantity::overlap_lc;
  cfg.steps = 21;
  cfg.eps = 0.2;
  const std::string a = emit_string(run_sweep(cfg), OutputFormat::csv, false);
  const std::string b = emit_string(run_sweep(cfg), OutputFormat::csv, false);
  CHECK(a == b);
  const std::string ja = emit_string(run_sweep(cfg), OutputFormat::json, false);
  const std::string jb = emit_string(run_sweep(cfg), OutputFormat::json, false);
  CHECK(ja == jb);
  CHECK(ja.find("timestamp") == std::string::npos);
}

TEST_CASE("metadata block is present when requested") {
  SweepConfig cfg;
  cfg.quantity = Quantity::overlap_lc;
  cfg.steps = 3;
  cfg.eps = 0.2;
  const std::string csv = emit_string(run_sweep(cfg), OutputFormat::csv, true);
  CHECK(csv.rfind("# qprobe 0.1.0\n", 0) == 0);
  CHECK(csv.find("# config: overlap-lc ") != std::string::npos);
  CHECK(csv.find("# grid: bz:-2..2/3") != std::string::npos);
}

TEST_CASE("parallel execution matches sequential") {
  SweepConfig cfg;
  cfg.quantity = Quantity::trotter_fidelity;
  cfg.steps = 17;
  cfg.bx = 0.1;
  cfg.eps = 0.2;
  const SweepResult seq = run_sweep(cfg);
  cfg.parallel = true;
  const SweepResult par = run_sweep(cfg);
  REQUIRE(seq.rows.size() == par.rows.size());
  for (std::size_t i = 0; i < seq.rows.size(); ++i)
    for (std::size_t j = 0; j < seq.rows[i].size(); ++j)
      CHECK(seq.rows[i][j] == par.rows[i][j]);
}

TEST_CASE("spectrum sweep supports larger chains") {
  SweepConfig cfg;
  cfg.quantity = Quantity::spectrum;
  cfg.n = 3;
  cfg.steps = 3;
  cfg.bx = 0.1;
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.columns.size() == 9);  // bz + 8 levels
  for (const auto& row : r.rows)
    for (std::size_t j = 2; j < row.size(); ++j) CHECK(row[j] >= row[j - 1]);
}
