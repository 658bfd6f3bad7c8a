#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stickyflow/forces.hpp"

namespace stickyflow {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownCommand, MissingField, BadType, OutOfRange, Invalid };

  ConfigError(Kind kind, std::string key, const std::string& detail);

  Kind kind() const noexcept { return kind_; }
  const std::string& key() const noexcept { return key_; }

 private:
  Kind kind_;
  std::string key_;
};

enum class Command {
  SimulateParticles,
  EvolveInclusion,
  SolveAttractive,
  PeriodicScheme,
  Project,
  WeakCheck,
  Compare,
};

std::string_view command_name(Command c);

struct ForceSpec {
  std::string kind;   // euler-poisson | potential | interaction
  std::string shape;  // potential: quadratic | linear; interaction: abs | quadratic
  double lambda = 0.0;
  std::optional<double> background;
  double strength = 1.0;
  double offset = 0.0;
  std::optional<double> lipschitz;
  std::optional<double> bound;
};

struct InitialSpec {
  std::string preset;  // empty for inline data
  double x = 0.0;
  double v = 0.0;
  double amplitude = 4.0;
  std::vector<double> masses, positions, velocities;  // inline particles
  std::vector<double> map_x, map_v;                   // inline map
};

struct RunConfig {
  Command command = Command::Project;
  std::optional<ForceSpec> force;
  std::optional<InitialSpec> initial;
  std::size_t grid = 0;
  double tau = 0.0;
  std::size_t steps = 0;
  std::size_t sample_every = 1;
  double t_end = 0.0;
  double sample_dt = 0.0;
  std::size_t particles = 0;
  std::vector<std::size_t> particle_counts;
  std::vector<double> values;
  std::vector<double> times;
  std::vector<double> dts;
  std::string scenario;
  std::uint64_t seed = 0;
  nlohmann::json echo;
};

RunConfig parse_config(std::string_view text);

ForceField make_force(const ForceSpec& spec);

}  // namespace stickyflow
