#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lxe/analysis.hpp"
#include "lxe/cft.hpp"
#include "lxe/circuit.hpp"
#include "lxe/cross_entropy.hpp"
#include "lxe/models.hpp"

namespace lxe {

inline constexpr std::string_view kCodeVersion = "0.1.0";

inline constexpr std::string_view kCsvHeader =
    "model,L,T,p,q,r_xx,r_ghz,bc,scope,noise_rate,n,chi_mean,chi_stderr,seed";

enum class Experiment { LxeSweep, CriticalAspectObc, CriticalAspectPbc, PhaseDiagram, NoiseSweep, LeakProbability, CftTables };

inline std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::LxeSweep: return "LxeSweep";
    case Experiment::CriticalAspectObc: return "CriticalAspectObc";
    case Experiment::CriticalAspectPbc: return "CriticalAspectPbc";
    case Experiment::PhaseDiagram: return "PhaseDiagram";
    case Experiment::NoiseSweep: return "NoiseSweep";
    case Experiment::LeakProbability: return "LeakProbability";
    case Experiment::CftTables: return "CftTables";
  }
  return "?";
}

inline Experiment parse_experiment(std::string_view s) {
  for (auto e : {Experiment::LxeSweep, Experiment::CriticalAspectObc, Experiment::CriticalAspectPbc,
                 Experiment::PhaseDiagram, Experiment::NoiseSweep, Experiment::LeakProbability, Experiment::CftTables})
    if (to_string(e) == s) return e;
  throw std::invalid_argument("unknown experiment '" + std::string(s) + "'");
}

/// Invalid configuration; `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& origin, std::size_t line, const std::string& what)
      : std::runtime_error(origin + (line ? ":" + std::to_string(line) : std::string()) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct RunConfig {
  Experiment experiment = Experiment::LxeSweep;
  Model model = Model::ZzX;
  Boundary boundary = Boundary::Open;
  std::vector<std::size_t> L;
  std::vector<std::size_t> T;       // absolute depths ...
  std::vector<double> T_over_L;     // ... or aspect ratios (exactly one of the two)
  std::vector<double> p{0.5};
  std::vector<double> q{0.0};
  std::vector<double> r_xx{0.0};
  std::vector<double> noise_rate{0.0};
  std::vector<std::size_t> r_ghz{0};  // 0 = whole chain
  std::vector<double> r_over_L;       // overrides r_ghz when given
  std::vector<std::size_t> scramble_depth{0};
  std::vector<double> scramble_over_L;  // overrides scramble_depth when given
  StateKind rho = StateKind::GhzPlus;
  StateKind sigma = StateKind::GhzMinus;
  Scope scope = Scope::All;
  std::size_t n_circuits = 1000;
  std::size_t records_per_circuit = 4;
  std::uint64_t master_seed = 0;
  std::string output_path;
  std::size_t workers = 1;
  std::string crossing_axis = "p";
  std::optional<double> time_scale;
  double amplitude = 1.0;
  std::string table = "obc";
  nlohmann::json source;
};

namespace detail {

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  for (std::size_t pos = text.find(quoted); pos != std::string_view::npos; pos = text.find(quoted, pos + 1)) {
    std::size_t k = pos + quoted.size();
    while (k < text.size() && (text[k] == ' ' || text[k] == '\t' || text[k] == '\r' || text[k] == '\n')) ++k;
    if (k < text.size() && text[k] == ':') return line_of_offset(text, pos);
  }
  return 0;
}

class ConfigReader {
 public:
  ConfigReader(std::string_view text, std::string origin, const nlohmann::json& j)
      : text_(text), origin_(std::move(origin)), j_(j) {}

  [[noreturn]] void fail(std::string_view key, const std::string& what) const {
    throw ConfigError(origin_, line_of_key(text_, key), "field '" + std::string(key) + "': " + what);
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }
  const nlohmann::json& at(std::string_view key) const { return j_.at(std::string(key)); }

  std::string string(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  double number(std::string_view key, const nlohmann::json& v) const {
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }
  double number(std::string_view key) const { return number(key, at(key)); }

  std::uint64_t integer(std::string_view key, const nlohmann::json& v) const {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      fail(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t integer(std::string_view key) const { return integer(key, at(key)); }

  template <class T, class Fn>
  std::vector<T> list(std::string_view key, Fn&& element) const {
    const auto& v = at(key);
    std::vector<T> out;
    if (v.is_array()) {
      if (v.empty()) fail(key, "grid must not be empty");
      for (const auto& e : v) out.push_back(element(e));
    } else {
      out.push_back(element(v));
    }
    return out;
  }
  std::vector<double> numbers(std::string_view key) const {
    return list<double>(key, [&](const nlohmann::json& e) { return number(key, e); });
  }
  std::vector<std::size_t> integers(std::string_view key) const {
    return list<std::size_t>(key, [&](const nlohmann::json& e) { return static_cast<std::size_t>(integer(key, e)); });
  }

 private:
  std::string_view text_;
  std::string origin_;
  const nlohmann::json& j_;
};

}  // namespace detail

/// Parses and validates a JSON run configuration. Errors carry the line of
/// the offending field (or the syntax error position).
inline RunConfig parse_config(std::string_view text, const std::string& origin = "config") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(origin, detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0), "syntax error: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError(origin, 1, "top level must be an object");

  static const std::set<std::string> known = {
      "experiment", "model", "boundary", "L", "T", "T_over_L", "p", "q", "r_xx", "noise_rate", "r_ghz", "r_over_L",
      "scramble_depth", "scramble_over_L", "rho", "sigma", "scope", "n_circuits", "records_per_circuit",
      "master_seed", "output_path", "workers", "crossing_axis", "time_scale", "amplitude", "table"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError(origin, detail::line_of_key(text, key), "unknown field '" + key + "'");

  detail::ConfigReader r(text, origin, j);
  RunConfig c;
  c.source = j;
  auto parsed = [&](std::string_view key, auto&& parse) {
    try {
      return parse(r.string(key));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      r.fail(key, e.what());
    }
  };

  if (!r.has("experiment")) throw ConfigError(origin, 0, "missing field 'experiment'");
  c.experiment = parsed("experiment", [](const std::string& s) { return parse_experiment(s); });
  if (!r.has("master_seed")) throw ConfigError(origin, 0, "missing field 'master_seed'");
  c.master_seed = r.integer("master_seed");

  if (r.has("model")) c.model = parsed("model", [](const std::string& s) { return parse_model(s); });
  if (c.model == Model::ZizXx) c.boundary = Boundary::Periodic;
  if (c.experiment == Experiment::CriticalAspectPbc) c.boundary = Boundary::Periodic;
  if (r.has("boundary")) c.boundary = parsed("boundary", [](const std::string& s) { return parse_boundary(s); });
  if (r.has("rho")) c.rho = parsed("rho", [](const std::string& s) { return parse_state_kind(s); });
  if (r.has("sigma")) c.sigma = parsed("sigma", [](const std::string& s) { return parse_state_kind(s); });
  if (r.has("scope")) c.scope = parsed("scope", [](const std::string& s) { return parse_scope(s); });
  if (r.has("output_path")) c.output_path = r.string("output_path");
  if (r.has("crossing_axis")) {
    c.crossing_axis = r.string("crossing_axis");
    if (c.crossing_axis != "p" && c.crossing_axis != "q" && c.crossing_axis != "r_xx" && c.crossing_axis != "noise_rate")
      r.fail("crossing_axis", "must be one of p, q, r_xx, noise_rate");
  }
  if (r.has("table")) {
    c.table = r.string("table");
    if (c.table != "obc" && c.table != "pbc" && c.table != "small-r") r.fail("table", "must be obc, pbc or small-r");
  }

  if (r.has("L")) c.L = r.integers("L");
  if (r.has("T") && r.has("T_over_L")) r.fail("T_over_L", "give either T or T_over_L, not both");
  if (r.has("T")) c.T = r.integers("T");
  if (r.has("T_over_L")) c.T_over_L = r.numbers("T_over_L");
  for (const char* key : {"p", "q", "r_xx", "noise_rate"}) {
    if (!r.has(key)) continue;
    auto v = r.numbers(key);
    for (double x : v)
      if (!(x >= 0.0 && x <= 1.0)) r.fail(key, "values must lie in [0, 1]");
    if (std::string_view(key) == "p") c.p = v;
    else if (std::string_view(key) == "q") c.q = v;
    else if (std::string_view(key) == "r_xx") c.r_xx = v;
    else c.noise_rate = v;
  }
  if (r.has("r_ghz") && r.has("r_over_L")) r.fail("r_over_L", "give either r_ghz or r_over_L, not both");
  if (r.has("r_ghz")) c.r_ghz = r.integers("r_ghz");
  if (r.has("r_over_L")) {
    c.r_over_L = r.numbers("r_over_L");
    for (double x : c.r_over_L)
      if (!(x > 0.0 && x <= 1.0)) r.fail("r_over_L", "values must lie in (0, 1]");
  }
  if (r.has("scramble_depth") && r.has("scramble_over_L"))
    r.fail("scramble_over_L", "give either scramble_depth or scramble_over_L, not both");
  if (r.has("scramble_depth")) c.scramble_depth = r.integers("scramble_depth");
  if (r.has("scramble_over_L")) {
    c.scramble_over_L = r.numbers("scramble_over_L");
    for (double x : c.scramble_over_L)
      if (!(x >= 0.0)) r.fail("scramble_over_L", "values must be non-negative");
  }
  if (r.has("n_circuits")) c.n_circuits = r.integer("n_circuits");
  if (r.has("records_per_circuit")) c.records_per_circuit = r.integer("records_per_circuit");
  if (r.has("workers")) c.workers = r.integer("workers");
  if (c.workers == 0) c.workers = 1;
  if (r.has("time_scale")) {
    c.time_scale = r.number("time_scale");
    if (!(*c.time_scale > 0.0)) r.fail("time_scale", "must be positive");
  }
  if (r.has("amplitude")) c.amplitude = r.number("amplitude");
  for (double x : c.T_over_L)
    if (!(x > 0.0)) r.fail("T_over_L", "values must be positive");

  const bool cft = c.experiment == Experiment::CftTables;
  if (!cft && c.L.empty()) throw ConfigError(origin, 0, "missing field 'L'");
  if (c.n_circuits == 0) r.fail("n_circuits", "must be >= 1");
  const bool sweep = !cft && c.experiment != Experiment::LeakProbability;
  if (sweep && c.T.empty() && c.T_over_L.empty()) throw ConfigError(origin, 0, "missing field 'T' or 'T_over_L'");
  if (cft && c.T_over_L.empty()) throw ConfigError(origin, 0, "missing field 'T_over_L'");
  if (c.experiment == Experiment::CriticalAspectObc && (c.model != Model::ZzX || c.boundary != Boundary::Open))
    throw ConfigError(origin, detail::line_of_key(text, "experiment"), "CriticalAspectObc needs the zzx model with open boundaries");
  if (c.experiment == Experiment::CriticalAspectPbc) {
    if (c.boundary != Boundary::Periodic)
      throw ConfigError(origin, detail::line_of_key(text, "boundary"), "CriticalAspectPbc needs periodic boundaries");
    if (!c.time_scale) throw ConfigError(origin, 0, "CriticalAspectPbc needs 'time_scale'");
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Grid expansion

/// Ensemble parameters of every grid point, in output order
/// (L, T, r, scramble depth, p, q, r_xx, noise_rate; last index fastest).
inline std::vector<EnsembleParams> expand_grid(const RunConfig& c) {
  std::vector<EnsembleParams> out;
  for (std::size_t L : c.L) {
    std::vector<std::size_t> Ts = c.T;
    for (double a : c.T_over_L) Ts.push_back(static_cast<std::size_t>(std::llround(a * double(L))));
    std::vector<std::size_t> rs = c.r_ghz;
    if (!c.r_over_L.empty()) {
      rs.clear();
      for (double f : c.r_over_L) rs.push_back(static_cast<std::size_t>(std::llround(f * double(L))));
    }
    std::vector<std::size_t> ds = c.scramble_depth;
    if (!c.scramble_over_L.empty()) {
      ds.clear();
      for (double f : c.scramble_over_L) ds.push_back(static_cast<std::size_t>(std::llround(f * double(L))));
    }
    for (std::size_t T : Ts)
      for (std::size_t r : rs)
        for (std::size_t d : ds)
          for (double p : c.p)
            for (double q : c.q)
              for (double rx : c.r_xx)
                for (double nr : c.noise_rate) {
                  EnsembleParams e;
                  e.model = c.model;
                  e.L = L;
                  e.T = T;
                  e.p = p;
                  e.q = q;
                  e.r_xx = rx;
                  e.noise_rate = nr;
                  e.boundary = c.boundary;
                  e.r_ghz = r;
                  e.scramble_depth = d;
                  if (T == 0) throw std::invalid_argument("grid: depth rounds to 0 at L = " + std::to_string(L));
                  e.validate();
                  out.push_back(e);
                }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Results

/// One CSV row. Sweeps fill every field from the ensemble; leak and CFT rows
/// reuse the schema (T holds the depth or the aspect ratio, r_ghz the block
/// width or r/L).
struct SweepRow {
  std::string model;
  std::size_t L = 0;
  double T = 0.0;
  double p = 0.0, q = 0.0, r_xx = 0.0;
  double r_ghz = 0.0;
  std::string bc = "open";
  std::string scope = "all";
  double noise_rate = 0.0;
  std::size_t n = 0;
  double chi_mean = 0.0;
  double chi_stderr = 0.0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  RunConfig config;
  std::vector<SweepRow> rows;
  nlohmann::json analysis = nlohmann::json::object();
};

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_line(const SweepRow& r) {
  std::string s = r.model;
  auto add = [&](const std::string& v) { s += ','; s += v; };
  add(std::to_string(r.L));
  add(format_number(r.T));
  add(format_number(r.p));
  add(format_number(r.q));
  add(format_number(r.r_xx));
  add(format_number(r.r_ghz));
  add(r.bc);
  add(r.scope);
  add(format_number(r.noise_rate));
  add(std::to_string(r.n));
  add(format_number(r.chi_mean));
  add(format_number(r.chi_stderr));
  add(std::to_string(r.seed));
  return s;
}

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << csv_line(r) << '\n';
}

inline std::vector<SweepRow> read_csv(std::istream& in, const std::string& origin = "csv") {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error(origin + ":1: unexpected header");
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 14) throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected 14 columns");
    try {
      SweepRow r;
      r.model = f[0];
      r.L = std::stoull(f[1]);
      r.T = std::stod(f[2]);
      r.p = std::stod(f[3]);
      r.q = std::stod(f[4]);
      r.r_xx = std::stod(f[5]);
      r.r_ghz = std::stod(f[6]);
      r.bc = f[7];
      r.scope = f[8];
      r.noise_rate = std::stod(f[9]);
      r.n = std::stoull(f[10]);
      r.chi_mean = std::stod(f[11]);
      r.chi_stderr = std::stod(f[12]);
      r.seed = std::stoull(f[13]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

inline std::vector<SweepRow> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(in, path);
}

inline double axis_value(const SweepRow& r, std::string_view axis) {
  if (axis == "p") return r.p;
  if (axis == "q") return r.q;
  if (axis == "r_xx") return r.r_xx;
  if (axis == "noise_rate") return r.noise_rate;
  throw std::invalid_argument("unknown axis '" + std::string(axis) + "'");
}

/// Splits rows into families of curves along `axis`: rows agreeing on every
/// other parameter (with T and r_ghz compared as fractions of L) share a
/// family; within a family, each L gives one curve.
inline std::map<std::string, Curves> group_curves(const std::vector<SweepRow>& rows, std::string_view axis) {
  std::map<std::string, Curves> out;
  for (const auto& r : rows) {
    if (r.L == 0) continue;
    const double L = double(r.L);
    std::string key = r.model + " bc=" + r.bc + " scope=" + r.scope + " T/L=" + format_number(r.T / L) +
                      " r/L=" + format_number(r.r_ghz == 0.0 ? 1.0 : r.r_ghz / L);
    for (std::string_view other : {"p", "q", "r_xx", "noise_rate"})
      if (other != axis) key += " " + std::string(other) + "=" + format_number(axis_value(r, other));
    out[key][static_cast<int>(r.L)].push_back({axis_value(r, axis), r.chi_mean, r.chi_stderr});
  }
  for (auto& [key, curves] : out)
    for (auto& [L, pts] : curves)
      std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.x < b.x; });
  return out;
}

/// Crossings of every family that has at least two sizes on a shared grid.
inline nlohmann::json crossings_json(const std::vector<SweepRow>& rows, std::string_view axis) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [key, curves] : group_curves(rows, axis)) {
    if (curves.size() < 2 || curves.begin()->second.size() < 2) continue;
    for (const auto& c : find_crossings(curves))
      out.push_back({{"family", key}, {"L1", c.L1}, {"L2", c.L2}, {"x_star", c.x_star}, {"std_error", c.std_error}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runs

/// Fraction of random depth-L symmetric brickwork scramblers (open chain)
/// under which some product of scrambled ZZ checks carries the all-X string.
inline LxeEstimate estimate_leak_probability(std::size_t L, std::size_t n_samples, std::uint64_t seed,
                                             std::size_t workers = 1) {
  if (L < 2) throw std::invalid_argument("estimate_leak_probability: L must be >= 2");
  if (n_samples == 0) throw std::invalid_argument("estimate_leak_probability: n_samples must be >= 1");
  std::vector<std::uint8_t> leak(n_samples, 0);
  parallel_for(n_samples, workers, [&](std::size_t i) {
    Rng rng = make_stream(seed, Stream::Scrambler, i);
    const auto c = scrambler_circuit(L, L, Boundary::Open, rng);
    const auto images = scrambled_zz_images(c);
    leak[i] = leak_check(images, L) ? 1 : 0;
  });
  std::size_t hits = 0;
  for (auto v : leak) hits += v;
  return make_estimate(hits, n_samples);
}

inline SweepRow row_for(const EnsembleParams& e, Scope scope, const LxeEstimate& est, std::uint64_t seed) {
  SweepRow r;
  r.model = std::string(to_string(e.model));
  r.L = e.L;
  r.T = double(e.T);
  r.p = e.p;
  r.q = e.q;
  r.r_xx = e.r_xx;
  r.r_ghz = double(e.ghz_width());
  r.bc = std::string(to_string(e.boundary));
  r.scope = std::string(to_string(scope));
  r.noise_rate = e.noise_rate;
  r.n = est.n_samples;
  r.chi_mean = est.mean;
  r.chi_stderr = est.std_error;
  r.seed = seed;
  return r;
}

namespace detail {

inline std::vector<SweepRow> cft_rows(const RunConfig& c) {
  std::vector<SweepRow> rows;
  const double s = c.time_scale.value_or(1.0);
  const std::vector<double> rs = c.r_over_L.empty() ? std::vector<double>{1.0} : c.r_over_L;
  for (double a : c.T_over_L) {
    for (double r : rs) {
      if (c.table == "pbc" && r != 1.0) continue;
      SweepRow row;
      row.model = "cft-" + c.table;
      row.T = a;
      row.r_ghz = c.table == "pbc" ? 1.0 : r;
      row.bc = c.table == "pbc" ? "periodic" : "open";
      row.scope = "-";
      if (c.table == "obc") row.chi_mean = cft::cardy_chi_obc(s * a, r);
      else if (c.table == "small-r") row.chi_mean = cft::chi_obc_small_r(s * a, r);
      else row.chi_mean = cft::chi_pbc(s * a, c.amplitude);
      row.seed = c.master_seed;
      rows.push_back(row);
    }
  }
  return rows;
}

inline nlohmann::json aspect_fits(const std::vector<SweepRow>& rows, const RunConfig& c) {
  // families keyed by (L, r/L)
  std::map<std::pair<std::size_t, double>, std::vector<cft::SimPoint>> fam;
  for (const auto& r : rows) fam[{r.L, r.r_ghz / double(r.L)}].push_back({r.T / double(r.L), r.chi_mean, r.chi_stderr});
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [key, pts] : fam) {
    if (pts.size() < 3) continue;
    nlohmann::json f = {{"L", key.first}, {"r_over_L", key.second}};
    if (c.experiment == Experiment::CriticalAspectObc) {
      const auto fit = cft::fit_scale_obc(pts, key.second);
      f["time_scale"] = fit.time_scale;
      f["rms"] = fit.rms;
      f["chi2"] = fit.chi2;
    } else {
      const auto amp = cft::fit_amplitude_pbc(pts, *c.time_scale);
      const auto ex = cft::fit_pbc_exponent(pts, *c.time_scale);
      f["time_scale"] = *c.time_scale;
      f["amplitude"] = amp.amplitude;
      f["rms"] = amp.rms;
      f["delta"] = ex.delta;
      f["delta_error"] = ex.delta_error;
      f["delta_amplitude"] = ex.amplitude;
    }
    out.push_back(f);
  }
  return out;
}

}  // namespace detail

/// Runs the configured experiment. Progress and wall-clock timings go to
/// `log` (if non-null); the returned rows are fully determined by the config.
inline SweepResult run(const RunConfig& c, std::ostream* log = nullptr) {
  SweepResult res;
  res.config = c;
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  auto elapsed = [](clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); };

  if (c.experiment == Experiment::CftTables) {
    res.rows = detail::cft_rows(c);
    return res;
  }

  if (c.experiment == Experiment::LeakProbability) {
    for (std::size_t L : c.L) {
      const auto t0 = clock::now();
      const auto est = estimate_leak_probability(L, c.n_circuits, c.master_seed, c.workers);
      SweepRow r;
      r.model = "leak";
      r.L = L;
      r.T = double(L);
      r.scope = "-";
      r.n = est.n_samples;
      r.chi_mean = est.mean;
      r.chi_stderr = est.std_error;
      r.seed = c.master_seed;
      res.rows.push_back(r);
      if (log) *log << "leak L=" << L << " q=" << est.mean << " +- " << est.std_error << " (" << elapsed(t0) << " s)\n";
    }
    return res;
  }

  const auto grid = expand_grid(c);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto t0 = clock::now();
    LxeRequest req;
    req.params = grid[i];
    req.rho = c.rho;
    req.sigma = c.sigma;
    req.scope = c.scope;
    req.n_circuits = c.n_circuits;
    req.records_per_circuit = c.records_per_circuit;
    req.master_seed = c.master_seed;
    req.workers = c.workers;
    const auto est = estimate_lxe(req);
    res.rows.push_back(row_for(grid[i], c.scope, est, c.master_seed));
    if (log)
      *log << "[" << (i + 1) << "/" << grid.size() << "] " << csv_line(res.rows.back()) << " (" << elapsed(t0)
           << " s)\n";
  }

  switch (c.experiment) {
    case Experiment::CriticalAspectObc:
    case Experiment::CriticalAspectPbc:
      res.analysis["fits"] = detail::aspect_fits(res.rows, c);
      break;
    default:
      res.analysis["crossings"] = crossings_json(res.rows, c.crossing_axis);
      res.analysis["crossing_axis"] = c.crossing_axis;
      break;
  }
  if (log) *log << "total " << elapsed(t_start) << " s\n";
  return res;
}

/// Metadata written next to the CSV.
inline nlohmann::json sidecar(const SweepResult& res) {
  nlohmann::json conv = {
      {"pauli", "bits (x, z) = (1, 1) denote Y; stored operators are Hermitian with a sign"},
      {"lxe_estimator", "mean over circuits of the indicator that a record sampled from rho is compatible with sigma"},
      {"seeding", "circuit i uses derive_seed(master_seed, 0xC1C1, i) with splitmix64; the same master seed serves "
                  "every grid point"},
      {"ghz_block", "GHZ block of width r starts at site (L - r) / 2"},
  };
  if (res.config.model == Model::ZizXx) conv["zizxx"] = std::string(kZizXxConvention);
  nlohmann::json j = {
      {"code_version", std::string(kCodeVersion)},
      {"experiment", std::string(to_string(res.config.experiment))},
      {"config", res.config.source},
      {"conventions", conv},
      {"master_seed", res.config.master_seed},
      {"n_rows", res.rows.size()},
      {"columns", std::string(kCsvHeader)},
      {"analysis", res.analysis},
  };
  return j;
}

inline std::string sidecar_path(const std::string& csv_path) {
  const std::string ext = ".csv";
  if (csv_path.size() > ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0)
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".meta.json";
  return csv_path + ".meta.json";
}

/// Writes the CSV and its JSON sidecar.
inline void emit(const SweepResult& res, const std::string& csv_path) {
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + csv_path + "'");
    write_csv(out, res.rows);
    if (!out) throw std::runtime_error("write failed for '" + csv_path + "'");
  }
  const std::string meta = sidecar_path(csv_path);
  std::ofstream out(meta, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + meta + "'");
  out << sidecar(res).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + meta + "'");
}

}  // namespace lxe
