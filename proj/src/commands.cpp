#include "stickyflow/commands.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "stickyflow/cone.hpp"
#include "stickyflow/crosscheck.hpp"
#include "stickyflow/euler_poisson.hpp"
#include "stickyflow/eulerian.hpp"
#include "stickyflow/io.hpp"
#include "stickyflow/parallel.hpp"
#include "stickyflow/particles.hpp"
#include "stickyflow/periodic.hpp"
#include "stickyflow/presets.hpp"

namespace stickyflow {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

template <class F>
auto initial_data(F&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ConfigError::Kind::Invalid, "initial", e.what());
  }
}

LagrangianState map_state(const RunConfig& cfg, std::size_t n) {
  const InitialSpec& s = *cfg.initial;
  return initial_data([&]() -> LagrangianState {
    if (!s.map_x.empty()) {
      const Grid g(s.map_x.size());
      return {TransportMap(g, s.map_x), VelocityField(g, s.map_v)};
    }
    const Grid g(n);
    if (s.preset == "two-rarefaction") return two_rarefaction_state(g);
    if (s.preset == "dirac") return dirac_state(g, s.x, s.v);
    if (s.preset == "fig123") {
      PeriodicState p = sine_velocity_state(g, s.amplitude);
      return {TransportMap(g, p.x), VelocityField(g, p.v)};
    }
    if (s.preset == "random") {
      Rng rng(cfg.seed);
      return random_smooth_state(g, rng);
    }
    const ParticleSystem sys(s.masses, s.positions, s.velocities);
    return particles_to_map(sys, g);
  });
}

ParticleSystem particle_state(const RunConfig& cfg) {
  const InitialSpec& s = *cfg.initial;
  return initial_data([&]() -> ParticleSystem {
    if (!s.masses.empty()) return ParticleSystem(s.masses, s.positions, s.velocities);
    if (s.preset == "random") {
      Rng rng(cfg.seed);
      return random_particles(cfg.particles, rng);
    }
    const LagrangianState st = map_state(cfg, cfg.particles);
    return map_to_particles(st.position, st.velocity);
  });
}

void write_map_row(CsvWriter& csv, double t, const TransportMap& x, const VelocityField& v) {
  csv.field(t);
  for (double xi : x.values()) csv.field(xi);
  for (double vi : v.values()) csv.field(vi);
  csv.end_row();
}

void write_map_header(CsvWriter& csv, std::size_t n) {
  csv.field("t");
  for (std::size_t i = 0; i < n; ++i) csv.field("x_" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) csv.field("v_" + std::to_string(i));
  csv.end_row();
}

struct Output {
  fs::path dir;
  RunOutcome outcome;

  void file(const std::string& name, const std::string& contents) {
    write_file(dir / name, contents);
    outcome.files.push_back(name);
  }
};

void simulate_particles(const RunConfig& cfg, Output& out) {
  const ParticleSystem sys = particle_state(cfg);
  const ForceField f = make_force(*cfg.force);
  const auto traj = evolve_sticky(sys, f, cfg.t_end, cfg.sample_dt);

  std::ostringstream os;
  CsvWriter csv(os);
  csv.field("t").field("particle").field("mass").field("position").field("velocity").end_row();
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const ParticleSystem& p = traj.states[s];
    for (std::size_t i = 0; i < p.size(); ++i) {
      csv.field(traj.times[s]).field(i).field(p.masses()[i]).field(p.positions()[i]);
      csv.field(p.velocities()[i]).end_row();
    }
  }
  out.file("trajectory.csv", os.str());

  std::ostringstream ev;
  CsvWriter ecsv(ev);
  ecsv.field("time").field("group_size").field("position").field("post_velocity").end_row();
  for (const CollisionEvent& e : traj.events) {
    for (const MergeGroup& g : e.groups) {
      ecsv.field(e.time).field(g.members.size()).field(g.position).field(g.post_velocity).end_row();
    }
  }
  out.file("events.csv", ev.str());

  const ParticleSystem& last = traj.states.back();
  out.outcome.summary = {
      {"initial_particles", sys.size()},
      {"final_particles", last.size()},
      {"events", traj.events.size()},
      {"initial_momentum", sys.total_momentum()},
      {"final_momentum", last.total_momentum()},
  };
}

void evolve_inclusion_cmd(const RunConfig& cfg, Output& out) {
  const LagrangianState st = map_state(cfg, cfg.grid);
  const ForceField f = make_force(*cfg.force);
  const auto traj = evolve_inclusion(st.position, st.velocity, f,
                                     InclusionOptions{cfg.t_end, cfg.tau, cfg.sample_every});
  std::ostringstream os;
  CsvWriter csv(os);
  write_map_header(csv, st.position.size());
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    write_map_row(csv, traj.times[s], traj.positions[s], traj.velocities[s]);
  }
  out.file("trajectory.csv", os.str());
  const TransportMap& last = traj.positions.back();
  out.outcome.summary = {
      {"samples", traj.times.size()},
      {"final_time", traj.times.back()},
      {"final_plateaus", plateaus(last, 0.0).intervals.size()},
      {"w2_from_initial", wasserstein2(last, st.position)},
  };
}

void solve_attractive_cmd(const RunConfig& cfg, Output& out) {
  const LagrangianState st = map_state(cfg, cfg.grid);
  const EPInitialData data(st.position, st.velocity, cfg.force->lambda);
  std::ostringstream os;
  CsvWriter csv(os);
  write_map_header(csv, st.position.size());
  json rows = json::array();
  std::vector<double> times = cfg.times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<TransportMap> xs;
  std::vector<std::vector<double>> ys;
  for (double t : times) {
    const LagrangianState s = attractive_ep_state(data, t);
    write_map_row(csv, t, s.position, s.velocity);
    rows.push_back({{"t", t}, {"plateaus", plateaus(s.position, 0.0).intervals.size()}});
    xs.push_back(s.position);
    ys.push_back(free_flow_integrand(data, t));
  }
  out.file("solution.csv", os.str());
  json summary = {{"lambda", data.lambda()}, {"times", rows}};
  if (times.size() >= 2) {
    summary["inclusion_certificate_pass"] = check_inclusion_certificate(times, xs, ys).pass;
  }
  out.outcome.summary = summary;
}

void periodic_cmd(const RunConfig& cfg, Output& out) {
  const Grid g(cfg.grid);
  const PeriodicState init = sine_velocity_state(g, cfg.initial->amplitude);
  const PeriodicRun r = run(init, cfg.tau, cfg.steps, cfg.sample_every);

  std::ostringstream os;
  CsvWriter csv(os);
  csv.field("step").field("t").field("energy");
  for (std::size_t i = 0; i < g.size(); ++i) csv.field("x_" + std::to_string(i));
  for (std::size_t i = 0; i < g.size(); ++i) csv.field("v_" + std::to_string(i));
  csv.end_row();
  std::size_t next_sample = 0;
  bool monotone = true;
  for (std::size_t n = 0; n < r.energy.size(); ++n) {
    csv.field(n).field(cfg.tau * static_cast<double>(n)).field(r.energy[n]);
    if (n > 0 && r.energy[n] > r.energy[n - 1] + 1e-12 * r.energy[0]) monotone = false;
    if (next_sample < r.sample_steps.size() && r.sample_steps[next_sample] == n) {
      const PeriodicState& s = r.samples[next_sample++];
      for (double x : s.x) csv.field(x);
      for (double v : s.v) csv.field(v);
    } else {
      for (std::size_t i = 0; i < 2 * g.size(); ++i) csv.empty();
    }
    csv.end_row();
  }
  out.file("trajectory.csv", os.str());
  out.file("trajectories.svg", render_periodic_svg(r));
  out.outcome.summary = {
      {"steps", cfg.steps},
      {"final_time", cfg.tau * static_cast<double>(cfg.steps)},
      {"initial_energy", r.energy.front()},
      {"final_energy", r.energy.back()},
      {"energy_nonincreasing", monotone},
      {"final_cluster_fraction", cluster_fraction(r.samples.back(), 1e-4)},
  };
}

void project_cmd(const RunConfig& cfg, Output& out) {
  const auto y = isotonic_projection(cfg.values);
  std::ostringstream os;
  CsvWriter csv(os);
  csv.field("index").field("value").end_row();
  for (std::size_t i = 0; i < y.size(); ++i) csv.field(i).field(y[i]).end_row();
  out.file("projection.csv", os.str());
  const std::vector<double> diff = difference(y, cfg.values);
  out.outcome.summary = {{"cells", y.size()}, {"l2_distance", norm_l2(diff)}};
}

struct WeakScenario {
  ParticleSystem system;
  double x_lo, x_hi;
};

WeakScenario weak_scenario(const std::string& name) {
  if (name == "two-particle-merge") {
    return {ParticleSystem({0.5, 0.5}, {0.2, 0.8}, {0.5, -0.45}), 0.0, 1.2};
  }
  return {ParticleSystem({1.0}, {0.3}, {0.7}), 0.0, 1.2};
}

void weak_check_cmd(const RunConfig& cfg, Output& out) {
  const WeakScenario sc = weak_scenario(cfg.scenario);
  const ForceField f = ForceField::euler_poisson(0.0);
  const auto phis = default_test_functions(0.0, 1.0, sc.x_lo, sc.x_hi);
  std::vector<std::vector<WeakResidual>> res(phis.size());
  for (double dt : cfg.dts) {
    const auto nodes = weak_nodes(evolve_sticky(sc.system, f, 1.0, dt), f);
    for (std::size_t k = 0; k < phis.size(); ++k) res[k].push_back(weak_residual(nodes, phis[k]));
  }
  json fns = json::array();
  double worst_mass = 0.0, worst_momentum = 0.0;
  for (std::size_t k = 0; k < phis.size(); ++k) {
    std::vector<double> mass, mom;
    for (const WeakResidual& r : res[k]) {
      mass.push_back(r.mass);
      mom.push_back(r.momentum);
      worst_mass = std::max(worst_mass, std::abs(r.mass));
      worst_momentum = std::max(worst_momentum, std::abs(r.momentum));
    }
    fns.push_back({{"test_function", phis[k].describe()},
                   {"mass", mass},
                   {"momentum", mom},
                   {"mass_ratios", richardson_ratios(mass)},
                   {"momentum_ratios", richardson_ratios(mom)}});
  }
  const json report = {{"scenario", cfg.scenario}, {"dts", cfg.dts}, {"results", fns}};
  out.file("weak_report.json", report.dump(2) + "\n");
  out.outcome.summary = {{"scenario", cfg.scenario},
                         {"max_abs_mass_residual", worst_mass},
                         {"max_abs_momentum_residual", worst_momentum}};
}

void compare_cmd(const RunConfig& cfg, Output& out) {
  const LagrangianState fine = map_state(cfg, cfg.grid);
  if (fine.position.size() != cfg.grid) {
    for (std::size_t k : cfg.particle_counts) {
      if (fine.position.size() % k != 0) {
        throw ConfigError(ConfigError::Kind::OutOfRange, "particles",
                          "particle counts must divide the initial data length");
      }
    }
  }
  const auto table = formula_vs_particles(fine, cfg.force->lambda, cfg.particle_counts, cfg.times);
  json rows = json::array();
  for (std::size_t j = 0; j < table.times.size(); ++j) {
    rows.push_back({{"t", table.times[j]},
                    {"w2", table.w2[j]},
                    {"ratios", richardson_ratios(table.w2[j])}});
  }
  const json report = {{"lambda", cfg.force->lambda},
                       {"grid", fine.position.size()},
                       {"particles", table.particle_counts},
                       {"table", rows}};
  out.file("compare.json", report.dump(2) + "\n");
  out.outcome.summary = {{"rows", rows.size()}};
}

}  // namespace

RunOutcome run(const RunConfig& config, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const auto start = std::chrono::steady_clock::now();
  Output out{out_dir, {}};
  switch (config.command) {
    case Command::SimulateParticles: simulate_particles(config, out); break;
    case Command::EvolveInclusion: evolve_inclusion_cmd(config, out); break;
    case Command::SolveAttractive: solve_attractive_cmd(config, out); break;
    case Command::PeriodicScheme: periodic_cmd(config, out); break;
    case Command::Project: project_cmd(config, out); break;
    case Command::WeakCheck: weak_check_cmd(config, out); break;
    case Command::Compare: compare_cmd(config, out); break;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json files = json::array();
  for (const std::string& name : out.outcome.files) {
    const std::string bytes = read_file(out_dir / name);
    files.push_back({{"path", name}, {"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a64(bytes))}});
  }
  const json manifest = {
      {"command", std::string(command_name(config.command))},
      {"version", kVersion},
      {"seed", config.seed},
      {"threads", max_threads()},
      {"config", config.echo},
      {"wall_time_seconds", wall},
      {"summary", out.outcome.summary},
      {"files", files},
  };
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return out.outcome;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Sticky pressureless flows in Lagrangian coordinates"};
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Override the config seed");
  app.add_flag("--quiet", quiet, "Suppress the summary on stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg = parse_config(read_file(config_path));
    if (seed) {
      cfg.seed = *seed;
      cfg.echo["seed"] = *seed;
    }
    const RunOutcome outcome = run(cfg, out_dir);
    if (!quiet) std::cout << outcome.summary.dump(2) << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace stickyflow
