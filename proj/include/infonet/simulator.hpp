#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infonet/fisher.hpp"
#include "infonet/trace.hpp"

namespace infonet {

// With probability `strength`, X_{x_agent}'s next displacement direction
// copies Y_{y_agent}'s previous one. An X agent with several couplings picks
// one of them uniformly at every step.
struct Coupling {
  int y_agent = kFirstAgent;
  int x_agent = kFirstAgent;
  double strength = 1.0;
};

struct ScenarioConfig {
  std::vector<Coupling> couplings;
  double free_agent_step = 0.3;  // meters per cycle
  long cycles = 6000;
  double theta = 1.0;
  double theta_critical = 0.5;
  double ball_step = 0.5;
  double ball_rest = 0.9;  // probability that the ball stays put in a cycle
  // X agent whose step length follows the pitchfork family
  //   |base + sign * sqrt(max(0, theta - theta_c)) + noise|,
  // sign uniform in {-1, +1} per step, noise ~ N(0, critical_noise^2).
  // 0 disables it.
  int critical_agent = 5;
  double critical_base = 0.0;
  double critical_noise = 0.02;

  void validate() const;
};

struct SweepConfig {
  ScenarioConfig scenario;
  SweepGrid grid;
  int games_per_theta = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

GameTrace simulate_match(const ScenarioConfig& cfg, std::uint64_t seed, std::string game_id = "game");

// Seed of game `game_index` at grid point `theta_index`:
//   splitmix64(splitmix64(splitmix64(seed) ^ theta_index) ^ game_index)
std::uint64_t derive_seed(std::uint64_t seed, std::size_t theta_index, std::size_t game_index);

// One game of a sweep, reproducible without generating the rest.
GameTrace sweep_game(const SweepConfig& cfg, std::size_t theta_index, std::size_t game_index);

std::map<double, std::vector<GameTrace>> sweep(const SweepConfig& cfg);

// Flat `key = value` configuration text, '#' starts a comment. `coupling`
// may repeat and takes "y_agent x_agent strength". `grid` lists the sweep
// values separated by spaces or commas.
struct ScenarioFile {
  ScenarioConfig scenario;
  std::optional<SweepGrid> grid;
  std::optional<int> games_per_theta;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> raw;  // key -> last value as written
};

ScenarioFile parse_scenario_file(std::istream& in);
ScenarioFile read_scenario_file(const std::string& path);

// Resolves a single-match config; `theta` must be present.
ScenarioConfig scenario_from_file(const ScenarioFile& file);
// Resolves a sweep config; `grid` must be present and a seed must come from
// the file or from `seed_override`.
SweepConfig sweep_from_file(const ScenarioFile& file, std::optional<std::uint64_t> seed_override);

}  // namespace infonet
