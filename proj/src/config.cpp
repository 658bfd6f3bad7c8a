#include "stickyflow/config.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace stickyflow {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::SimulateParticles, "simulate-particles"},
    {Command::EvolveInclusion, "evolve-inclusion"},
    {Command::SolveAttractive, "solve-attractive"},
    {Command::PeriodicScheme, "periodic-scheme"},
    {Command::Project, "project"},
    {Command::WeakCheck, "weak-check"},
    {Command::Compare, "compare"},
}};

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

[[noreturn]] void missing(const std::string& key) {
  throw ConfigError(ConfigError::Kind::MissingField, key, "required field is missing");
}

[[noreturn]] void bad_type(const std::string& key, const char* expected) {
  throw ConfigError(ConfigError::Kind::BadType, key, std::string("expected ") + expected);
}

[[noreturn]] void out_of_range(const std::string& key, const std::string& detail) {
  throw ConfigError(ConfigError::Kind::OutOfRange, key, detail);
}

class Reader {
 public:
  Reader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {}

  bool has(const char* key) const { return obj_.contains(key); }
  std::string path(const char* key) const { return join(prefix_, key); }

  double number(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) bad_type(path(key), "a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) out_of_range(path(key), "must be finite");
    return d;
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  double positive(const char* key, double fallback) const {
    const double d = number(key, fallback);
    if (!(d > 0.0)) out_of_range(path(key), "must be positive");
    return d;
  }

  std::size_t count(const char* key, std::size_t fallback, std::size_t min = 1) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) bad_type(path(key), "an integer");
    const auto n = v.get<long long>();
    if (n < static_cast<long long>(min)) {
      out_of_range(path(key), "must be at least " + std::to_string(min));
    }
    return static_cast<std::size_t>(n);
  }

  std::string text(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_string()) bad_type(path(key), "a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const char* key) const {
    const json& v = at(key);
    if (!v.is_array()) bad_type(path(key), "an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string item = path(key) + "[" + std::to_string(i) + "]";
      if (!v[i].is_number()) bad_type(item, "a number");
      out.push_back(v[i].get<double>());
      if (!std::isfinite(out.back())) out_of_range(item, "must be finite");
    }
    return out;
  }

  const json& at(const char* key) const {
    if (!has(key)) missing(path(key));
    return obj_.at(key);
  }

 private:
  const json& obj_;
  std::string prefix_;
};

ForceSpec parse_force(const json& j) {
  if (!j.is_object()) bad_type("force", "an object");
  Reader r(j, "force");
  ForceSpec f;
  f.kind = r.text("kind", "");
  if (f.kind.empty()) missing("force.kind");
  f.strength = r.number("strength", 1.0);
  f.offset = r.number("offset", 0.0);
  if (r.has("lipschitz")) f.lipschitz = r.positive("lipschitz", 1.0);
  if (r.has("bound")) f.bound = r.positive("bound", 1.0);
  if (f.kind == "euler-poisson") {
    f.lambda = r.number("lambda");
    if (r.has("background")) {
      f.background = r.number("background");
      if (*f.background < 0.0) out_of_range("force.background", "must be nonnegative");
    }
  } else if (f.kind == "potential") {
    f.shape = r.text("shape", "quadratic");
    if (f.shape != "quadratic" && f.shape != "linear") {
      out_of_range("force.shape", "potential shape must be quadratic or linear");
    }
  } else if (f.kind == "interaction") {
    f.shape = r.text("shape", "abs");
    if (f.shape != "abs" && f.shape != "quadratic") {
      out_of_range("force.shape", "interaction shape must be abs or quadratic");
    }
  } else {
    out_of_range("force.kind", "unknown force kind '" + f.kind + "'");
  }
  return f;
}

InitialSpec parse_initial(const json& j) {
  if (!j.is_object()) bad_type("initial", "an object");
  Reader r(j, "initial");
  InitialSpec s;
  s.preset = r.text("preset", "");
  if (!s.preset.empty()) {
    if (s.preset != "two-rarefaction" && s.preset != "dirac" && s.preset != "fig123" &&
        s.preset != "random") {
      out_of_range("initial.preset", "unknown preset '" + s.preset + "'");
    }
    s.x = r.number("x", 0.0);
    s.v = r.number("v", 0.0);
    s.amplitude = r.number("amplitude", 4.0);
    return s;
  }
  if (r.has("masses") || r.has("positions") || r.has("velocities")) {
    s.masses = r.numbers("masses");
    s.positions = r.numbers("positions");
    s.velocities = r.numbers("velocities");
    if (s.positions.size() != s.masses.size() || s.velocities.size() != s.masses.size()) {
      throw ConfigError(ConfigError::Kind::Invalid, "initial",
                        "masses, positions and velocities differ in length");
    }
    if (s.masses.empty()) out_of_range("initial.masses", "needs at least one particle");
    return s;
  }
  if (r.has("x") || r.has("v")) {
    s.map_x = r.numbers("x");
    s.map_v = r.numbers("v");
    if (s.map_x.size() != s.map_v.size()) {
      throw ConfigError(ConfigError::Kind::Invalid, "initial", "x and v differ in length");
    }
    if (s.map_x.empty()) out_of_range("initial.x", "needs at least one cell");
    return s;
  }
  missing("initial.preset");
}

bool is_map_initial(const InitialSpec& s) {
  return !s.map_x.empty() || (!s.preset.empty());
}

}  // namespace

ConfigError::ConfigError(Kind kind, std::string key, const std::string& detail)
    : std::runtime_error(key.empty() ? detail : "'" + key + "': " + detail),
      kind_(kind), key_(std::move(key)) {}

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigError::Kind::Syntax, "", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError(ConfigError::Kind::BadType, "", "config must be an object");
  Reader r(doc, "");
  RunConfig cfg;
  cfg.echo = doc;

  const std::string name = r.text("command", "");
  if (name.empty()) missing("command");
  bool found = false;
  for (const auto& [cmd, cmd_name] : kCommands) {
    if (name == cmd_name) {
      cfg.command = cmd;
      found = true;
    }
  }
  if (!found) throw ConfigError(ConfigError::Kind::UnknownCommand, "command", "unknown command '" + name + "'");

  if (r.has("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !s.is_number_integer()) bad_type("seed", "an unsigned integer");
    if (s.is_number_integer() && s.get<long long>() < 0) out_of_range("seed", "must be nonnegative");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (r.has("force")) cfg.force = parse_force(doc.at("force"));
  if (r.has("initial")) cfg.initial = parse_initial(doc.at("initial"));
  if (r.has("times")) cfg.times = r.numbers("times");
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    if (cfg.times[i] < 0.0) out_of_range("times[" + std::to_string(i) + "]", "must be nonnegative");
  }

  auto require_force = [&] {
    if (!cfg.force) missing("force");
  };
  auto require_initial = [&] {
    if (!cfg.initial) missing("initial");
  };
  auto require_ep_lambda = [&](double fallback, bool allow_missing) {
    if (!cfg.force) {
      if (!allow_missing) missing("force");
      ForceSpec f;
      f.kind = "euler-poisson";
      f.lambda = fallback;
      cfg.force = f;
    }
    if (cfg.force->kind != "euler-poisson") {
      out_of_range("force.kind", "this command needs an euler-poisson force");
    }
    if (cfg.force->background) out_of_range("force.background", "not supported by this command");
    if (cfg.force->lambda < 0.0) out_of_range("force.lambda", "must be >= 0 for this command");
  };

  switch (cfg.command) {
    case Command::SimulateParticles:
      require_force();
      require_initial();
      cfg.t_end = r.positive("t_end", 1.0);
      cfg.sample_dt = r.positive("sample_dt", cfg.t_end / 10.0);
      cfg.particles = r.count("particles", 64);
      break;
    case Command::EvolveInclusion:
      require_force();
      require_initial();
      cfg.grid = r.count("grid", 256);
      cfg.tau = r.positive("tau", 1e-3);
      cfg.t_end = r.positive("t_end", 1.0);
      cfg.sample_every = r.count("sample_every", 10);
      break;
    case Command::SolveAttractive:
      require_ep_lambda(0.0, false);
      require_initial();
      cfg.grid = r.count("grid", 1024);
      if (cfg.times.empty()) cfg.times = {0.0, 0.5, 1.0, 2.0};
      break;
    case Command::PeriodicScheme:
      if (!cfg.initial) {
        InitialSpec s;
        s.preset = "fig123";
        cfg.initial = s;
      }
      if (cfg.initial->preset != "fig123") {
        out_of_range("initial.preset", "periodic-scheme supports the fig123 preset");
      }
      cfg.grid = r.count("grid", 400);
      cfg.tau = r.positive("tau", 1e-3);
      cfg.steps = r.count("steps", 5000);
      cfg.sample_every = r.count("sample_every", 10);
      break;
    case Command::Project:
      cfg.values = r.numbers("values");
      if (cfg.values.empty()) out_of_range("values", "needs at least one value");
      break;
    case Command::WeakCheck:
      cfg.scenario = r.text("scenario", "free-particle");
      if (cfg.scenario != "free-particle" && cfg.scenario != "two-particle-merge") {
        out_of_range("scenario", "must be free-particle or two-particle-merge");
      }
      cfg.dts = r.has("dts") ? r.numbers("dts") : std::vector<double>{0.02, 0.01, 0.005};
      for (std::size_t i = 0; i < cfg.dts.size(); ++i) {
        if (!(cfg.dts[i] > 0.0)) out_of_range("dts[" + std::to_string(i) + "]", "must be positive");
      }
      break;
    case Command::Compare:
      require_ep_lambda(1.0, true);
      if (!cfg.initial) {
        InitialSpec s;
        s.preset = "random";
        cfg.initial = s;
      }
      if (!is_map_initial(*cfg.initial)) {
        out_of_range("initial", "compare needs map initial data (a preset or x/v arrays)");
      }
      cfg.grid = r.count("grid", 8192);
      if (r.has("particles")) {
        const json& p = doc.at("particles");
        if (!p.is_array()) bad_type("particles", "an array of integers");
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (!p[i].is_number_integer() || p[i].get<long long>() < 1) {
            out_of_range("particles[" + std::to_string(i) + "]", "must be a positive integer");
          }
          const auto k = static_cast<std::size_t>(p[i].get<long long>());
          if (cfg.grid % k != 0) {
            out_of_range("particles[" + std::to_string(i) + "]", "must divide grid");
          }
          cfg.particle_counts.push_back(k);
        }
      } else {
        cfg.particle_counts = {64, 128, 256};
      }
      if (cfg.times.empty()) cfg.times = {0.5, 1.0, 2.0};
      break;
  }
  if (cfg.force) make_force(*cfg.force);
  return cfg;
}

ForceField make_force(const ForceSpec& spec) {
  ForceField f = [&] {
    const double s = spec.strength;
    if (spec.kind == "euler-poisson") return ForceField::euler_poisson(spec.lambda, spec.background);
    if (spec.kind == "potential") {
      if (spec.shape == "linear") return ForceField::potential([s](double) { return s; });
      return ForceField::potential([s](double x) { return s * x; });
    }
    if (spec.shape == "quadratic") return ForceField::interaction([s](double r) { return s * r; });
    return ForceField::interaction([s](double r) { return r > 0.0 ? s : (r < 0.0 ? -s : 0.0); });
  }();
  if (spec.offset != 0.0) f = f.with_offset(spec.offset);
  if (spec.lipschitz) f = f.with_lipschitz(*spec.lipschitz);
  if (spec.bound) f = f.with_pointwise_bound(*spec.bound);
  return f;
}

}  // namespace stickyflow
