#pragma once

// Parameter sweeps over bz for every observable the CLI exposes, with
// deterministic CSV/JSON emission.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qprobe/probe_protocol.hpp"

namespace qprobe {

inline constexpr const char* kVersion = "0.1.0";

enum class Quantity { spectrum, concurrence, overlap_lc, overlap_ac, sensitivity, trotter_fidelity };

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::spectrum: return "spectrum";
    case Quantity::concurrence: return "concurrence";
    case Quantity::overlap_lc: return "overlap-lc";
    case Quantity::overlap_ac: return "overlap-ac";
    case Quantity::sensitivity: return "sensitivity";
    case Quantity::trotter_fidelity: return "trotter-fidelity";
  }
  return "?";
}

struct SweepConfig {
  Quantity quantity = Quantity::overlap_lc;
  double bz_min = -2.0;
  double bz_max = 2.0;
  int steps = 81;
  double bx = 0.0;
  double eps = 0.2;
  double tau = 1.6;
  Method method = Method::exact;
  int n = 2;
  bool compare = false;   // overlap-ac: emit exact + trotter + fidelity columns
  bool parallel = false;
};

struct SweepMetadata {
  std::string tool_version;
  std::string timestamp;  // suppressed entirely under --no-metadata
  std::string grid;
};

struct SweepResult {
  SweepConfig config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // ascending in bz, rows.size() == steps
  SweepMetadata metadata;
};

inline void validate(const SweepConfig& cfg) {
  if (!(cfg.bz_min <= cfg.bz_max))
    throw std::invalid_argument("sweep: bz_min must not exceed bz_max");
  if (cfg.steps < 1) throw std::invalid_argument("sweep: steps must be >= 1");
  if (cfg.steps == 1 && cfg.bz_min != cfg.bz_max)
    throw std::invalid_argument("sweep: steps = 1 requires bz_min = bz_max");
  if (cfg.n < 2) throw std::invalid_argument("sweep: n must be >= 2");
  const bool two_spin_only = cfg.quantity == Quantity::concurrence ||
                             cfg.quantity == Quantity::overlap_lc ||
                             cfg.quantity == Quantity::sensitivity;
  if (two_spin_only && cfg.n != 2)
    throw std::invalid_argument("sweep: this quantity is defined for n = 2 only");
  if (cfg.quantity == Quantity::sensitivity && cfg.bx <= 0)
    throw std::invalid_argument("sweep: sensitivity requires bx > 0");
  if (cfg.quantity == Quantity::overlap_lc && cfg.eps <= 0)
    throw std::invalid_argument("sweep: overlap-lc requires eps > 0");
}

// Uniform inclusive grid; both endpoints are reproduced exactly.
inline std::vector<double> sweep_grid(const SweepConfig& cfg) {
  std::vector<double> g(cfg.steps);
  for (int i = 0; i < cfg.steps; ++i)
    g[i] = i == cfg.steps - 1 ? cfg.bz_max
                              : cfg.bz_min + i * (cfg.bz_max - cfg.bz_min) / (cfg.steps - 1);
  return g;
}

namespace detail {

inline std::vector<std::string> sweep_columns(const SweepConfig& cfg) {
  switch (cfg.quantity) {
    case Quantity::spectrum: {
      std::vector<std::string> cols{"bz"};
      for (std::size_t k = 1; k <= (std::size_t{1} << cfg.n); ++k)
        cols.push_back("e" + std::to_string(k));
      return cols;
    }
    case Quantity::concurrence: return {"bz", "C", "degenerate"};
    case Quantity::overlap_lc: return {"bz", "L", "degenerate"};
    case Quantity::overlap_ac:
      return cfg.compare ? std::vector<std::string>{"bz", "L_exact", "L_trotter", "fidelity"}
                         : std::vector<std::string>{"bz", "L"};
    case Quantity::sensitivity: return {"bz", "dphi_dbz"};
    case Quantity::trotter_fidelity: return {"bz", "fidelity_plus", "fidelity_minus"};
  }
  return {};
}

inline std::vector<double> sweep_row(const SweepConfig& cfg, double bz) {
  switch (cfg.quantity) {
    case Quantity::spectrum: {
      std::vector<double> row{bz};
      const auto ev = spectrum(ChainSpec{cfg.n, bz, cfg.bx, 0.0, false});
      row.insert(row.end(), ev.begin(), ev.end());
      return row;
    }
    case Quantity::concurrence: {
      const GroundState g =
          ground_state_numeric(ChainSpec{2, bz, cfg.bx, 0.0, false}, Sector::triplet);
      const DenseOperator rho = partial_trace(g.state, {1, 2});
      return {bz, concurrence(rho), g.near_degenerate ? 1.0 : 0.0};
    }
    case Quantity::overlap_lc: {
      const LevelCrossingOverlap r = overlap_level_crossing(bz, cfg.eps);
      return {bz, r.value, r.degenerate ? 1.0 : 0.0};
    }
    case Quantity::overlap_ac: {
      ProtocolRun run{ChainSpec{cfg.n, bz, cfg.bx, cfg.eps, false}, cfg.tau, cfg.method};
      if (!cfg.compare) return {bz, overlap_avoided_point(run)};
      run.method = Method::exact;
      const double le = overlap_avoided_point(run);
      run.method = Method::trotter;
      const double lt = overlap_avoided_point(run);
      const auto [f0, f1] = trotter_branch_fidelities(run);
      return {bz, le, lt, std::min(f0, f1)};
    }
    case Quantity::sensitivity:
      return {bz, sensitivity(bz, cfg.bx)};
    case Quantity::trotter_fidelity: {
      const ProtocolRun run{ChainSpec{cfg.n, bz, cfg.bx, cfg.eps, false}, cfg.tau,
                            Method::trotter};
      const auto [f0, f1] = trotter_branch_fidelities(run);
      return {bz, f0, f1};
    }
  }
  throw std::invalid_argument("sweep: unknown quantity");
}

inline std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

inline SweepResult run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const std::vector<double> grid = sweep_grid(cfg);
  SweepResult res;
  res.config = cfg;
  res.columns = detail::sweep_columns(cfg);
  res.rows.resize(grid.size());

  auto compute = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < grid.size(); i += stride)
      res.rows[i] = detail::sweep_row(cfg, grid[i]);
  };
  if (cfg.parallel && grid.size() > 1) {
    const std::size_t nthreads =
        std::min<std::size_t>(grid.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(compute, t, nthreads);
    for (auto& th : pool) th.join();
  } else {
    compute(0, 1);
  }

  res.metadata.tool_version = kVersion;
  res.metadata.timestamp = detail::iso_timestamp();
  res.metadata.grid = "bz:" + detail::fmt12(cfg.bz_min) + ".." + detail::fmt12(cfg.bz_max) +
                      "/" + std::to_string(cfg.steps);
  return res;
}

// -- emission ----------------------------------------------------------------

enum class OutputFormat { csv, json };

inline std::string config_description(const SweepConfig& cfg) {
  std::string s = std::string(quantity_name(cfg.quantity));
  s += " bz_min=" + detail::fmt12(cfg.bz_min) + " bz_max=" + detail::fmt12(cfg.bz_max) +
       " steps=" + std::to_string(cfg.steps) + " bx=" + detail::fmt12(cfg.bx) +
       " eps=" + detail::fmt12(cfg.eps) + " tau=" + detail::fmt12(cfg.tau) +
       " n=" + std::to_string(cfg.n) +
       " method=" + (cfg.method == Method::exact ? "exact" : "trotter");
  if (cfg.compare) s += " compare=1";
  return s;
}

inline void emit_csv(const SweepResult& r, std::ostream& out, bool with_metadata = true) {
  if (with_metadata) {
    out << "# qprobe " << r.metadata.tool_version << '\n'
        << "# generated: " << r.metadata.timestamp << '\n'
        << "# config: " << config_description(r.config) << '\n'
        << "# grid: " << r.metadata.grid << '\n';
  }
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    out << (i ? "," : "") << r.columns[i];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << detail::fmt12(row[i]);
    out << '\n';
  }
}

inline nlohmann::json config_json(const SweepConfig& cfg) {
  return nlohmann::json{
      {"quantity", quantity_name(cfg.quantity)}, {"bz_min", cfg.bz_min},
      {"bz_max", cfg.bz_max},                    {"steps", cfg.steps},
      {"bx", cfg.bx},                            {"eps", cfg.eps},
      {"tau", cfg.tau},                          {"n", cfg.n},
      {"method", cfg.method == Method::exact ? "exact" : "trotter"},
      {"compare", cfg.compare}};
}

inline void emit_json(const SweepResult& r, std::ostream& out, bool with_metadata = true) {
  nlohmann::json j;
  j["config"] = config_json(r.config);
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  if (with_metadata) {
    j["metadata"] = {{"tool_version", r.metadata.tool_version},
                     {"timestamp", r.metadata.timestamp},
                     {"grid", r.metadata.grid}};
  }
  out << j.dump(2) << '\n';
}

inline void emit(const SweepResult& r, OutputFormat fmt, std::ostream& out,
                 bool with_metadata = true) {
  if (fmt == OutputFormat::csv)
    emit_csv(r, out, with_metadata);
  else
    emit_json(r, out, with_metadata);
}

// -- parsing (round-trip support) --------------------------------------------

struct ParsedSweep {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline ParsedSweep parse_csv(const std::string& text) {
  ParsedSweep p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (p.columns.empty()) {
      p.columns = cells;
    } else {
      std::vector<double> row;
      for (const auto& c : cells) row.push_back(std::stod(c));
      p.rows.push_back(std::move(row));
    }
  }
  return p;
}

inline ParsedSweep parse_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ParsedSweep p;
  p.columns = j.at("columns").get<std::vector<std::string>>();
  p.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  return p;
}

}  // namespace qprobe
