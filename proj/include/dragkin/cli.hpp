#pragma once

// Batch front end: JSON run configurations in, CSV or JSON tables out.
//
// Exit codes: 0 success, 2 configuration error, 3 domain error raised by the
// physics modules, 4 I/O failure.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iomanip>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dragkin/carriers.hpp"
#include "dragkin/core.hpp"
#include "dragkin/observables.hpp"
#include "dragkin/photon_kinetics.hpp"
#include "dragkin/pulse.hpp"

namespace dragkin::cli {

using json = nlohmann::json;

inline constexpr char const* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kConfigError = 2, kDomainError = 3, kIoError = 4 };

/// Schema violation; `field` is a JSON pointer to the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, std::string const& msg)
      : std::runtime_error("config error at " + (field.empty() ? std::string("/") : field) + ": " + msg),
        field_(std::move(field)) {}
  std::string const& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Task { evolve, sweep, pulse, doppler, observables };

inline char const* to_string(Task t) {
  switch (t) {
    case Task::evolve: return "evolve";
    case Task::sweep: return "sweep";
    case Task::pulse: return "pulse";
    case Task::doppler: return "doppler";
    case Task::observables: return "observables";
  }
  return "?";
}

inline Task parse_task(std::string const& s, std::string const& where = "/task") {
  for (Task t : {Task::evolve, Task::sweep, Task::pulse, Task::doppler, Task::observables}) {
    if (s == to_string(t)) return t;
  }
  throw ConfigError(where, "unknown task '" + s + "'");
}

enum class Format { csv, json };

// ---------------------------------------------------------------------------
// Typed view over a JSON object that remembers where it is in the document.

class Node {
 public:
  Node(json const& j, std::string path) : j_(j), path_(std::move(path)) {}

  std::string const& path() const { return path_; }
  json const& raw() const { return j_; }
  bool has(std::string const& key) const { return j_.is_object() && j_.contains(key); }

  Node child(std::string const& key) const {
    require_object();
    if (!j_.contains(key)) throw ConfigError(at(key), "missing required field '" + key + "'");
    return Node(j_.at(key), at(key));
  }

  double number(std::string const& key) const {
    Node c = child(key);
    return c.as_number();
  }

  double number_or(std::string const& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  double as_number() const {
    if (!j_.is_number()) throw ConfigError(path_, "expected a number");
    double const v = j_.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path_, "number must be finite");
    return v;
  }

  std::int64_t integer(std::string const& key) const {
    Node c = child(key);
    if (!c.j_.is_number_integer()) throw ConfigError(c.path_, "expected an integer");
    return c.j_.get<std::int64_t>();
  }

  std::string string(std::string const& key) const {
    Node c = child(key);
    if (!c.j_.is_string()) throw ConfigError(c.path_, "expected a string");
    return c.j_.get<std::string>();
  }

  std::string string_or(std::string const& key, std::string fallback) const {
    return has(key) ? string(key) : fallback;
  }

  void require_object() const {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  /// Rejects keys outside `allowed` so typos surface as errors.
  void only(std::initializer_list<char const*> allowed) const {
    require_object();
    for (auto const& [key, value] : j_.items()) {
      bool ok = false;
      for (char const* a : allowed) ok = ok || key == a;
      if (!ok) throw ConfigError(at(key), "unknown field '" + key + "'");
    }
  }

 private:
  std::string at(std::string const& key) const { return path_ + "/" + key; }

  json const& j_;
  std::string path_;
};

// ---------------------------------------------------------------------------
// Task configurations.

/// A value given either as a number or as "planck" (computed from a temperature).
struct OccupancyInput {
  bool planck = true;
  double value = 0.0;
};

struct EvolveConfig {
  PhotonMode mode;
  BathConfig bath;
  DriftSpec drift;
  OccupancyInput N0;        // "planck" -> planck_occupancy(omega, T)
  OccupancyInput N_source;  // "planck" -> planck_occupancy(omega, T_i)
  std::optional<double> stream_u0;
  std::vector<double> times;
};

struct SweepConfig {
  BathConfig bath;
  std::vector<double> u;
  std::vector<double> cos_alpha;
  std::vector<double> omega;
  OccupancyInput N_source;
  std::int64_t max_points = 10'000'000;
};

struct PulseConfig {
  double omega_bar = 0.0;
  double width = 0.0;
  std::int64_t n = 0;
  double chirp = 0.0;
  BarrierSpec barrier;
  double samples_per_duration = 16.0;
};

struct DopplerCase {
  double omega = 0.0;
  double u = 0.0;
  double cos_alpha = 1.0;
  DopplerDirection direction = DopplerDirection::emit_to_obs;
};

struct DopplerConfig {
  std::vector<DopplerCase> cases;
};

struct ObservablesConfig {
  double T = 1.0;
  double T_i = 1.0;
  double u = 0.0;
  double N_mode = 1.0;
  double tau0 = 1.0;
  double cos_alpha = 1.0;
  double N_source = 1.0;
  double beta = 1.0;
  std::vector<double> times;  // evaluation times of the mass growth past threshold
};

struct OutputSpec {
  std::string path;  // empty: stdout
  Format format = Format::csv;
};

struct RunConfig {
  Task task = Task::evolve;
  OutputSpec output;
  std::uint64_t seed = 0;
  std::variant<EvolveConfig, SweepConfig, PulseConfig, DopplerConfig, ObservablesConfig> params;
  std::string hash;  // FNV-1a of the canonical document
};

namespace detail {

inline std::string fnv1a_hex(std::string const& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// SplitMix64; portable so randomized grids are identical on every platform.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  double uniform() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline BathConfig parse_bath(Node const& n) {
  n.only({"beta_e", "beta_p", "beta_ph", "beta_b", "T_c", "T_ph", "T_b", "T"});
  BathConfig b;
  b.beta_e = n.number("beta_e");
  b.beta_p = n.number("beta_p");
  b.beta_ph = n.number("beta_ph");
  b.beta_b = n.number("beta_b");
  b.T_c = n.number("T_c");
  b.T_ph = n.number("T_ph");
  b.T_b = n.number("T_b");
  b.T = n.number("T");
  for (char const* k : {"beta_e", "beta_p", "beta_ph", "beta_b"}) {
    if (n.number(k) < 0.0) throw ConfigError(n.path() + "/" + k, "collision frequency must be >= 0");
  }
  for (char const* k : {"T_c", "T_ph", "T_b", "T"}) {
    if (!(n.number(k) > 0.0)) throw ConfigError(n.path() + "/" + k, "temperature must be > 0");
  }
  if (!(b.total() > 0.0)) throw ConfigError(n.path(), "total collision frequency must be > 0");
  return b;
}

inline OccupancyInput parse_occupancy(Node const& parent, std::string const& key) {
  Node c = parent.child(key);
  if (c.raw().is_string()) {
    if (c.raw().get<std::string>() != "planck") throw ConfigError(c.path(), "expected a number or \"planck\"");
    return {true, 0.0};
  }
  double const v = c.as_number();
  if (v < 0.0) throw ConfigError(c.path(), "occupancy must be >= 0");
  return {false, v};
}

// An axis is a list of numbers, {"start", "stop", "count"} (inclusive,
// uniform), or {"random": {"min", "max", "count"}} drawn from the seed.
inline std::vector<double> parse_axis(Node const& n, SplitMix* rng) {
  std::vector<double> out;
  if (n.raw().is_array()) {
    if (n.raw().empty()) throw ConfigError(n.path(), "axis must not be empty");
    for (std::size_t i = 0; i < n.raw().size(); ++i) {
      out.push_back(Node(n.raw()[i], n.path() + "/" + std::to_string(i)).as_number());
    }
    return out;
  }
  n.require_object();
  if (n.has("random")) {
    n.only({"random"});
    Node r = n.child("random");
    r.only({"min", "max", "count"});
    double const lo = r.number("min"), hi = r.number("max");
    auto const count = r.integer("count");
    if (count < 1) throw ConfigError(r.path() + "/count", "count must be >= 1");
    if (!(hi >= lo)) throw ConfigError(r.path(), "max must be >= min");
    for (std::int64_t i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * rng->uniform());
    return out;
  }
  n.only({"start", "stop", "count"});
  double const a = n.number("start"), b = n.number("stop");
  auto const count = n.integer("count");
  if (count < 1) throw ConfigError(n.path() + "/count", "count must be >= 1");
  if (count == 1) return {a};
  for (std::int64_t i = 0; i < count; ++i) {
    out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

inline std::vector<double> parse_times(Node const& n, SplitMix* rng) {
  auto t = parse_axis(n, rng);
  if (!(t.front() >= 0.0)) throw ConfigError(n.path(), "times must be >= 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw ConfigError(n.path(), "times must be strictly increasing");
  }
  return t;
}

inline PhotonMode parse_mode(Node const& n) {
  n.only({"q", "cos_alpha", "omega"});
  PhotonMode m;
  m.q = n.number("q");
  m.cos_alpha = n.number("cos_alpha");
  m.omega = n.number_or("omega", m.q);
  if (!(m.q >= 0.0)) throw ConfigError(n.path() + "/q", "q must be >= 0");
  if (!(std::abs(m.cos_alpha) <= 1.0)) throw ConfigError(n.path() + "/cos_alpha", "|cos_alpha| must be <= 1");
  if (!(m.omega > 0.0)) throw ConfigError(n.path() + "/omega", "omega must be > 0");
  return m;
}

inline DriftSpec parse_drift(Node const& n) {
  n.only({"u", "mode", "omega_drive", "E", "H"});
  DriftSpec d;
  d.u = n.number("u");
  if (!(d.u >= 0.0)) throw ConfigError(n.path() + "/u", "u must be >= 0");
  std::string const mode = n.string_or("mode", "constant");
  if (mode == "constant") {
    d.mode = DriftMode::constant;
  } else if (mode == "cosine") {
    d.mode = DriftMode::cosine;
    d.omega_drive = n.number("omega_drive");
    if (!(d.omega_drive > 0.0)) throw ConfigError(n.path() + "/omega_drive", "omega_drive must be > 0");
  } else {
    throw ConfigError(n.path() + "/mode", "expected \"constant\" or \"cosine\"");
  }
  d.E = n.number_or("E", 0.0);
  d.H = n.number_or("H", 0.0);
  return d;
}

inline EvolveConfig parse_evolve(Node const& root, SplitMix* rng) {
  EvolveConfig c;
  c.mode = parse_mode(root.child("mode"));
  c.bath = parse_bath(root.child("bath"));
  c.drift = parse_drift(root.child("drift"));
  c.N0 = root.has("N0") ? parse_occupancy(root, "N0") : OccupancyInput{};
  c.N_source = root.has("N_source") ? parse_occupancy(root, "N_source") : OccupancyInput{};
  if (root.has("stream")) {
    Node s = root.child("stream");
    s.only({"u0"});
    c.stream_u0 = s.number("u0");
    if (c.drift.mode != DriftMode::constant) throw ConfigError(s.path(), "a photon stream requires constant drift");
  }
  c.times = parse_times(root.child("times"), rng);
  return c;
}

inline SweepConfig parse_sweep(Node const& root, SplitMix* rng) {
  SweepConfig c;
  c.bath = parse_bath(root.child("bath"));
  Node g = root.child("grid");
  g.only({"u", "cos_alpha", "omega"});
  c.u = parse_axis(g.child("u"), rng);
  c.cos_alpha = parse_axis(g.child("cos_alpha"), rng);
  c.omega = parse_axis(g.child("omega"), rng);
  for (double v : c.u) {
    if (!(v >= 0.0)) throw ConfigError(g.path() + "/u", "u must be >= 0");
  }
  for (double v : c.cos_alpha) {
    if (!(std::abs(v) <= 1.0)) throw ConfigError(g.path() + "/cos_alpha", "|cos_alpha| must be <= 1");
  }
  for (double v : c.omega) {
    if (!(v > 0.0)) throw ConfigError(g.path() + "/omega", "omega must be > 0");
  }
  c.N_source = root.has("N_source") ? parse_occupancy(root, "N_source") : OccupancyInput{};
  if (root.has("max_points")) c.max_points = root.integer("max_points");
  double const total = static_cast<double>(c.u.size()) * static_cast<double>(c.cos_alpha.size()) *
                       static_cast<double>(c.omega.size());
  if (total > static_cast<double>(c.max_points)) {
    throw ConfigError(g.path(), "grid has " + dragkin::detail::num(total) + " points, cap is " +
                                    std::to_string(c.max_points));
  }
  return c;
}

inline PulseConfig parse_pulse(Node const& root) {
  PulseConfig c;
  Node p = root.child("pulse");
  p.only({"omega_bar", "width", "n", "chirp"});
  c.omega_bar = p.number("omega_bar");
  c.width = p.number("width");
  c.n = p.integer("n");
  c.chirp = p.number_or("chirp", 0.0);
  if (c.n < 16) throw ConfigError(p.path() + "/n", "n must be >= 16");
  Node b = root.child("barrier");
  b.only({"kind", "length", "beta", "omega_ref"});
  std::string const kind = b.string("kind");
  if (kind == "absorber") {
    c.barrier.kind = BarrierKind::absorber;
  } else if (kind == "amplifier") {
    c.barrier.kind = BarrierKind::amplifier;
  } else {
    throw ConfigError(b.path() + "/kind", "expected \"absorber\" or \"amplifier\"");
  }
  c.barrier.length = b.number("length");
  c.barrier.beta = b.number("beta");
  c.barrier.omega_ref = b.number("omega_ref");
  if (!(c.barrier.length >= 0.0)) throw ConfigError(b.path() + "/length", "length must be >= 0");
  if (!(c.barrier.beta >= 0.0)) throw ConfigError(b.path() + "/beta", "beta must be >= 0");
  if (!(c.barrier.omega_ref > 0.0)) throw ConfigError(b.path() + "/omega_ref", "omega_ref must be > 0");
  c.samples_per_duration = root.number_or("samples_per_duration", 16.0);
  if (!(c.samples_per_duration >= 16.0)) {
    throw ConfigError(root.path() + "/samples_per_duration", "at least 16 samples per duration are required");
  }
  return c;
}

inline DopplerConfig parse_doppler(Node const& root) {
  DopplerConfig c;
  Node cases = root.child("cases");
  if (!cases.raw().is_array() || cases.raw().empty()) throw ConfigError(cases.path(), "expected a non-empty array");
  for (std::size_t i = 0; i < cases.raw().size(); ++i) {
    Node n(cases.raw()[i], cases.path() + "/" + std::to_string(i));
    n.only({"omega", "u", "cos_alpha", "direction"});
    DopplerCase d;
    d.omega = n.number("omega");
    d.u = n.number("u");
    d.cos_alpha = n.number("cos_alpha");
    if (!(std::abs(d.cos_alpha) <= 1.0)) throw ConfigError(n.path() + "/cos_alpha", "|cos_alpha| must be <= 1");
    std::string const dir = n.string_or("direction", "emit_to_obs");
    if (dir == "emit_to_obs") {
      d.direction = DopplerDirection::emit_to_obs;
    } else if (dir == "obs_to_emit") {
      d.direction = DopplerDirection::obs_to_emit;
    } else {
      throw ConfigError(n.path() + "/direction", "expected \"emit_to_obs\" or \"obs_to_emit\"");
    }
    c.cases.push_back(d);
  }
  return c;
}

inline ObservablesConfig parse_observables(Node const& root, SplitMix* rng) {
  ObservablesConfig c;
  c.T = root.number("T");
  c.T_i = root.number("T_i");
  c.u = root.number("u");
  c.N_mode = root.number("N_mode");
  c.tau0 = root.number_or("tau0", 1.0);
  c.cos_alpha = root.number_or("cos_alpha", 1.0);
  c.N_source = root.number_or("N_source", 1.0);
  c.beta = root.number_or("beta", 1.0);
  if (!(c.T > 0.0)) throw ConfigError(root.path() + "/T", "T must be > 0");
  if (!(c.T_i > 0.0)) throw ConfigError(root.path() + "/T_i", "T_i must be > 0");
  if (!(c.u >= 0.0)) throw ConfigError(root.path() + "/u", "u must be >= 0");
  if (!(std::abs(c.cos_alpha) <= 1.0)) throw ConfigError(root.path() + "/cos_alpha", "|cos_alpha| must be <= 1");
  if (root.has("times")) c.times = parse_times(root.child("times"), rng);
  return c;
}

}  // namespace detail

/// Validates a parsed document. `expected` is the task named on the command
/// line; a "task" field in the document must agree with it.
inline RunConfig parse_config(json const& doc, std::optional<Task> expected = std::nullopt) {
  Node root(doc, "");
  root.require_object();
  RunConfig rc;
  if (root.has("task")) {
    rc.task = parse_task(root.string("task"));
    if (expected && *expected != rc.task) {
      throw ConfigError("/task", std::string("config is for task '") + to_string(rc.task) +
                                     "' but '" + to_string(*expected) + "' was requested");
    }
  } else if (expected) {
    rc.task = *expected;
  } else {
    throw ConfigError("/task", "missing required field 'task'");
  }
  if (root.has("seed")) {
    auto const s = root.integer("seed");
    if (s < 0) throw ConfigError("/seed", "seed must be >= 0");
    rc.seed = static_cast<std::uint64_t>(s);
  }
  if (root.has("output")) {
    Node o = root.child("output");
    o.only({"path", "format"});
    rc.output.path = o.string_or("path", "");
    std::string const f = o.string_or("format", "csv");
    if (f == "csv") {
      rc.output.format = Format::csv;
    } else if (f == "json") {
      rc.output.format = Format::json;
    } else {
      throw ConfigError("/output/format", "expected \"csv\" or \"json\"");
    }
  }

  detail::SplitMix rng(rc.seed);
  switch (rc.task) {
    case Task::evolve:
      root.only({"task", "seed", "output", "mode", "bath", "drift", "N0", "N_source", "stream", "times"});
      rc.params = detail::parse_evolve(root, &rng);
      break;
    case Task::sweep:
      root.only({"task", "seed", "output", "bath", "grid", "N_source", "max_points"});
      rc.params = detail::parse_sweep(root, &rng);
      break;
    case Task::pulse:
      root.only({"task", "seed", "output", "pulse", "barrier", "samples_per_duration"});
      rc.params = detail::parse_pulse(root);
      break;
    case Task::doppler:
      root.only({"task", "seed", "output", "cases"});
      rc.params = detail::parse_doppler(root);
      break;
    case Task::observables:
      root.only({"task", "seed", "output", "T", "T_i", "u", "N_mode", "tau0", "cos_alpha", "N_source", "beta",
                 "times"});
      rc.params = detail::parse_observables(root, &rng);
      break;
  }
  rc.hash = detail::fnv1a_hex(doc.dump());
  return rc;
}

inline json parse_json_text(std::string const& text) {
  try {
    return json::parse(text);
  } catch (json::parse_error const& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Results.

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
};

namespace detail {

inline std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string format_cell(Cell const& c) {
  if (auto const* d = std::get_if<double>(&c)) return format_number(*d);
  if (auto const* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline json cell_json(Cell const& c) {
  if (auto const* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_number(*d);
    return *d;
  }
  if (auto const* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

inline double resolve(OccupancyInput const& in, double omega, double T) {
  return in.planck ? planck_occupancy(omega, T) : in.value;
}

}  // namespace detail

inline void write_csv(Table const& t, std::ostream& os) {
  for (auto const& [k, v] : t.meta) os << "# " << k << "=" << v << "\n";
  for (auto const& [k, v] : t.summary) os << "# " << k << "=" << detail::format_cell(v) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (auto const& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::format_cell(row[i]);
    os << "\n";
  }
}

inline void write_json(Table const& t, std::ostream& os) {
  json doc;
  json meta = json::object();
  for (auto const& [k, v] : t.meta) meta[k] = v;
  doc["meta"] = meta;
  json summary = json::object();
  for (auto const& [k, v] : t.summary) summary[k] = detail::cell_json(v);
  doc["summary"] = summary;
  doc["columns"] = t.columns;
  json rows = json::array();
  for (auto const& row : t.rows) {
    json r = json::array();
    for (auto const& c : row) r.push_back(detail::cell_json(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(1) << "\n";
}

// ---------------------------------------------------------------------------
// Task runners.

inline Table run_evolve(EvolveConfig const& c) {
  EvolutionProblem p;
  p.mode = c.mode;
  p.bath = c.bath;
  p.drift = c.drift;
  p.t_grid = c.times;
  double const T_i = mixture_temperature(c.bath);
  p.N0 = detail::resolve(c.N0, c.mode.omega, c.bath.T);
  p.N_source = detail::resolve(c.N_source, c.mode.omega, T_i);

  EvolutionResult r;
  Table t;
  if (c.stream_u0) {
    double const drifted = drifted_planck_occupancy(c.mode, *c.stream_u0, c.bath.T);
    r = evolve_stream(p, drifted);
    t.summary.emplace_back("N_init_drifted", drifted);
  } else if (c.drift.mode == DriftMode::cosine) {
    r = evolve_ac_field(p);
  } else {
    r = evolve_constant_field(p);
  }
  double const x = drift_parameter(c.mode, c.drift.u);
  t.summary.emplace_back("x", x);
  t.summary.emplace_back("gamma_q", r.gamma_q);
  t.summary.emplace_back("T_i", T_i);
  t.summary.emplace_back("N0", p.N0);
  t.summary.emplace_back("N_source", p.N_source);
  t.columns = {"t", "N", "regime"};
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    t.rows.push_back({r.times[i], r.occupancies[i], std::string(to_string(r.regime))});
  }
  return t;
}

/// One sweep row: growth rates and the stationary occupancy (or "divergent").
inline std::vector<Cell> sweep_row(BathConfig const& bath, double T_i, OccupancyInput const& source, double u,
                                   double cos_alpha, double omega) {
  PhotonMode const mode{omega, cos_alpha, omega, 0.0};
  double const x = drift_parameter(mode, u);
  double const gamma = growth_increment(mode, bath, u);
  double const N_source = detail::resolve(source, omega, T_i);
  Cell stationary = std::string("divergent");
  if (x < 1.0) stationary = stationary_limit(mode, u, N_source);
  return {u, cos_alpha, omega, x, gamma, amplification_coefficient(gamma),
          std::string(to_string(classify(x))), stationary};
}

inline Table run_sweep(SweepConfig const& c, unsigned threads = 1) {
  double const T_i = mixture_temperature(c.bath);
  std::size_t const nc = c.cos_alpha.size(), no = c.omega.size();
  std::size_t const total = c.u.size() * nc * no;

  Table t;
  t.columns = {"u", "cos_alpha", "omega", "x", "gamma_q", "Gamma_q", "regime", "N_stationary"};
  t.rows.resize(total);
  std::vector<std::exception_ptr> errors(std::max(1u, threads));

  auto work = [&](unsigned worker, std::size_t begin, std::size_t end) {
    try {
      for (std::size_t idx = begin; idx < end; ++idx) {
        std::size_t const iu = idx / (nc * no);
        std::size_t const ic = (idx / no) % nc;
        std::size_t const io = idx % no;
        t.rows[idx] = sweep_row(c.bath, T_i, c.N_source, c.u[iu], c.cos_alpha[ic], c.omega[io]);
      }
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };

  unsigned const workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  if (workers == 1) {
    work(0, 0, total);
  } else {
    std::vector<std::thread> pool;
    std::size_t const chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t const b = std::min(total, w * chunk), e = std::min(total, b + chunk);
      pool.emplace_back(work, w, b, e);
    }
    for (auto& th : pool) th.join();
  }
  for (auto const& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  t.summary.emplace_back("T_i", T_i);
  t.summary.emplace_back("points", static_cast<std::int64_t>(total));
  return t;
}

inline PulseSpec build_input_pulse(PulseConfig const& c) {
  return build_pulse_spectrum(c.omega_bar, c.width, static_cast<std::size_t>(c.n), c.chirp);
}

inline Propagation run_propagation(PulseConfig const& c) {
  return propagate(build_input_pulse(c), c.barrier, PropagateOptions{c.samples_per_duration});
}

inline Table run_pulse(PulseConfig const& c) {
  auto const input = build_input_pulse(c);
  auto const r = propagate(input, c.barrier, PropagateOptions{c.samples_per_duration});
  auto const v = apparent_velocity(r.t_peak_in, r.t_peak_out, c.barrier.length);
  Table t;
  t.summary.emplace_back("t_peak_in", r.t_peak_in);
  t.summary.emplace_back("t_peak_out", r.t_peak_out);
  t.summary.emplace_back("v_app", v.value);
  t.summary.emplace_back("v_app_flag", std::string(v.infinite ? "infinite" : v.negative ? "negative" : "finite"));
  t.summary.emplace_back("power_in", input.power());
  t.summary.emplace_back("power_out", r.output.power());
  t.summary.emplace_back("correlation",
                         envelope_correlation(r.input_envelope.intensity, r.output_envelope.intensity));
  t.columns = {"t_in", "envelope_in", "t_out", "envelope_out"};
  for (std::size_t i = 0; i < r.input_envelope.times.size(); ++i) {
    t.rows.push_back({r.input_envelope.times[i], r.input_envelope.intensity[i], r.output_envelope.times[i],
                      r.output_envelope.intensity[i]});
  }
  return t;
}

inline Table run_doppler(DopplerConfig const& c) {
  Table t;
  t.columns = {"omega_in", "u", "cos_alpha", "direction", "omega_out", "wavelength_ratio"};
  for (auto const& d : c.cases) {
    double const out = doppler_shift(d.omega, d.u, d.cos_alpha, d.direction);
    double const ratio = doppler_wavelength(1.0, d.u, d.cos_alpha, d.direction);
    t.rows.push_back({d.omega, d.u, d.cos_alpha,
                      std::string(d.direction == DopplerDirection::emit_to_obs ? "emit_to_obs" : "obs_to_emit"),
                      out, ratio});
  }
  return t;
}

inline Table run_observables(ObservablesConfig const& c) {
  Table t;
  t.columns = {"quantity", "t", "value"};
  auto add = [&](char const* name, double time, double value) {
    t.rows.push_back({std::string(name), time, value});
  };
  double const M0 = c.T * c.N_mode;
  if (c.u < 1.0) {
    PhotonMode const mode{1.0, c.cos_alpha, 1.0, 0.0};
    auto const d = decompose(mode, c.u, c.N_source);
    add("N_isotropic", 0.0, d.isotropic);
    add("N_anisotropic", 0.0, d.anisotropic);
    auto const m = renormalized_mass_energy(c.T, c.T_i, c.u, c.N_mode);
    add("avg_energy", 0.0, m.avg_energy);
    add("mode_mass", 0.0, m.mode_mass);
    add("per_photon_mass", 0.0, m.per_photon_mass);
    add("rest_mass", 0.0, m.rest_mass);
    add("occupancy", 0.0, m.occupancy);
    auto const dil = time_dilation(c.tau0, c.u, c.T, c.T_i);
    add("tau", 0.0, dil.tau);
    add("length", 0.0, dil.length);
  } else if (c.u > 1.0) {
    double const gamma = c.beta * (c.u * c.cos_alpha - 1.0);
    std::vector<double> const times = c.times.empty() ? std::vector<double>{0.0} : c.times;
    for (double time : times) add("supercritical_mass", time, supercritical_mass(M0, c.u, gamma, time, c.T, c.T_i));
  } else {
    throw DomainError("observables: u = c has neither a stationary nor an exponential mass; choose u != 1");
  }
  return t;
}

inline Table run(RunConfig const& rc, unsigned threads = 1) {
  Table t;
  switch (rc.task) {
    case Task::evolve: t = run_evolve(std::get<EvolveConfig>(rc.params)); break;
    case Task::sweep: t = run_sweep(std::get<SweepConfig>(rc.params), threads); break;
    case Task::pulse: t = run_pulse(std::get<PulseConfig>(rc.params)); break;
    case Task::doppler: t = run_doppler(std::get<DopplerConfig>(rc.params)); break;
    case Task::observables: t = run_observables(std::get<ObservablesConfig>(rc.params)); break;
  }
  t.meta.insert(t.meta.begin(), {{"dragkin", kVersion}, {"task", to_string(rc.task)}, {"config_hash", rc.hash},
                                 {"seed", std::to_string(rc.seed)}});
  return t;
}

/// Machine-readable description of the configuration format and conventions.
inline std::string export_schema() {
  json const number = {{"type", "number"}};
  json const occupancy = {{"oneOf", {{{"type", "number"}, {"minimum", 0}}, {{"const", "planck"}}}}};
  json const axis = {
      {"oneOf",
       {{{"type", "array"}, {"items", number}, {"minItems", 1}},
        {{"type", "object"},
         {"required", {"start", "stop", "count"}},
         {"properties", {{"start", number}, {"stop", number}, {"count", {{"type", "integer"}, {"minimum", 1}}}}}},
        {{"type", "object"},
         {"required", {"random"}},
         {"properties",
          {{"random",
            {{"type", "object"},
             {"required", {"min", "max", "count"}},
             {"properties", {{"min", number}, {"max", number}, {"count", {{"type", "integer"}, {"minimum", 1}}}}}}}}}}}}};
  json const bath = {{"type", "object"},
                     {"required", {"beta_e", "beta_p", "beta_ph", "beta_b", "T_c", "T_ph", "T_b", "T"}},
                     {"properties",
                      {{"beta_e", number}, {"beta_p", number}, {"beta_ph", number}, {"beta_b", number},
                       {"T_c", number}, {"T_ph", number}, {"T_b", number}, {"T", number}}}};
  json s;
  s["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  s["title"] = "dragkin run configuration";
  s["units"] = {{"hbar", 1}, {"c", 1}, {"speeds", "u/c"}, {"frequencies", "energy units (hbar = 1)"}};
  s["invocation"] = "dragkin <task> --config <path> [--out <path>] [--format csv|json] [--threads N]";
  s["exit_codes"] = {{"0", "success"}, {"2", "config error"}, {"3", "domain error"}, {"4", "I/O error"}};
  s["csv"] = "'#'-prefixed metadata lines (dragkin version, task, config_hash, seed, scalar results), one header row, "
             "comma-separated data rows, LF line endings, 17 significant digits";
  s["type"] = "object";
  s["required"] = {"task"};
  s["properties"] = {
      {"task", {{"enum", {"evolve", "sweep", "pulse", "doppler", "observables"}}}},
      {"seed", {{"type", "integer"}, {"minimum", 0}}},
      {"output",
       {{"type", "object"},
        {"properties", {{"path", {{"type", "string"}}}, {"format", {{"enum", {"csv", "json"}}}}}}}},
  };
  s["tasks"] = {
      {"evolve",
       {{"required", {"mode", "bath", "drift", "times"}},
        {"properties",
         {{"mode",
           {{"type", "object"},
            {"required", {"q", "cos_alpha"}},
            {"properties", {{"q", number}, {"cos_alpha", number}, {"omega", number}}}}},
          {"bath", bath},
          {"drift",
           {{"type", "object"},
            {"required", {"u"}},
            {"properties",
             {{"u", number}, {"mode", {{"enum", {"constant", "cosine"}}}}, {"omega_drive", number}, {"E", number},
              {"H", number}}}}},
          {"N0", occupancy},
          {"N_source", occupancy},
          {"stream", {{"type", "object"}, {"required", {"u0"}}, {"properties", {{"u0", number}}}}},
          {"times", axis}}},
        {"columns", {"t", "N", "regime"}}}},
      {"sweep",
       {{"required", {"bath", "grid"}},
        {"properties",
         {{"bath", bath},
          {"grid",
           {{"type", "object"},
            {"required", {"u", "cos_alpha", "omega"}},
            {"properties", {{"u", axis}, {"cos_alpha", axis}, {"omega", axis}}}}},
          {"N_source", occupancy},
          {"max_points", {{"type", "integer"}, {"default", 10000000}}}}},
        {"columns", {"u", "cos_alpha", "omega", "x", "gamma_q", "Gamma_q", "regime", "N_stationary"}},
        {"order", "lexicographic in (u, cos_alpha, omega)"}}},
      {"pulse",
       {{"required", {"pulse", "barrier"}},
        {"properties",
         {{"pulse",
           {{"type", "object"},
            {"required", {"omega_bar", "width", "n"}},
            {"properties",
             {{"omega_bar", number}, {"width", number}, {"n", {{"type", "integer"}, {"minimum", 16}}},
              {"chirp", number}}}}},
          {"barrier",
           {{"type", "object"},
            {"required", {"kind", "length", "beta", "omega_ref"}},
            {"properties",
             {{"kind", {{"enum", {"absorber", "amplifier"}}}}, {"length", number}, {"beta", number},
              {"omega_ref", number}}}}},
          {"samples_per_duration", {{"type", "number"}, {"minimum", 16}}}}},
        {"columns", {"t_in", "envelope_in", "t_out", "envelope_out"}},
        {"summary", {"t_peak_in", "t_peak_out", "v_app", "v_app_flag", "power_in", "power_out", "correlation"}}}},
      {"doppler",
       {{"required", {"cases"}},
        {"properties",
         {{"cases",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"omega", "u", "cos_alpha"}},
              {"properties",
               {{"omega", number}, {"u", number}, {"cos_alpha", number},
                {"direction", {{"enum", {"emit_to_obs", "obs_to_emit"}}}}}}}}}}}},
        {"columns", {"omega_in", "u", "cos_alpha", "direction", "omega_out", "wavelength_ratio"}}}},
      {"observables",
       {{"required", {"T", "T_i", "u", "N_mode"}},
        {"properties",
         {{"T", number}, {"T_i", number}, {"u", number}, {"N_mode", number}, {"tau0", number},
          {"cos_alpha", number}, {"N_source", number}, {"beta", number}, {"times", axis}}},
        {"columns", {"quantity", "t", "value"}}}},
  };
  return s.dump(2) + "\n";
}

}  // namespace dragkin::cli
