#include "infonet/simulator.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "infonet/error.hpp"

namespace infonet {

void ScenarioConfig::validate() const {
  if (cycles < 100) throw Error(ErrorCode::InvalidConfig, "cycles must be >= 100");
  if (!(free_agent_step > 0.0) || !(ball_step > 0.0))
    throw Error(ErrorCode::InvalidConfig, "free_agent_step and ball_step must be > 0");
  if (!std::isfinite(theta) || !std::isfinite(theta_critical))
    throw Error(ErrorCode::InvalidConfig, "theta and theta_critical must be finite");
  if (critical_agent != 0 && (critical_agent < kFirstAgent || critical_agent > kLastAgent))
    throw Error(ErrorCode::InvalidConfig, "critical_agent must be 0 or in 2..11");
  if (!(ball_rest >= 0.0 && ball_rest <= 1.0)) throw Error(ErrorCode::InvalidConfig, "ball_rest must be in [0, 1]");
  if (!(critical_noise >= 0.0)) throw Error(ErrorCode::InvalidConfig, "critical_noise must be >= 0");
  std::set<std::pair<int, int>> pairs;
  for (const auto& c : couplings) {
    if (c.y_agent < kFirstAgent || c.y_agent > kLastAgent || c.x_agent < kFirstAgent || c.x_agent > kLastAgent)
      throw Error(ErrorCode::InvalidConfig, "coupling agents must be in 2..11");
    if (!(c.strength >= 0.0 && c.strength <= 1.0))
      throw Error(ErrorCode::InvalidConfig, "coupling strength must be in [0, 1]");
    if (!pairs.insert({c.y_agent, c.x_agent}).second)
      throw Error(ErrorCode::InvalidConfig, "coupling " + std::to_string(c.y_agent) + "->" +
                                                std::to_string(c.x_agent) + " listed twice");
  }
}

void SweepConfig::validate() const {
  scenario.validate();
  grid.validate();
  if (games_per_theta < 1) throw Error(ErrorCode::InvalidConfig, "games_per_theta must be >= 1");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::size_t theta_index, std::size_t game_index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ theta_index) ^ game_index);
}

GameTrace simulate_match(const ScenarioConfig& cfg, std::uint64_t seed, std::string game_id) {
  cfg.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> heading(0.0, two_pi);
  std::normal_distribution<double> noise(0.0, 1.0);

  const std::size_t steps = static_cast<std::size_t>(cfg.cycles) - 1;
  std::vector<std::vector<const Coupling*>> drivers(kTeamSize);
  for (const auto& c : cfg.couplings) drivers[c.x_agent - kFirstAgent].push_back(&c);
  const double branch = std::sqrt(std::max(0.0, cfg.theta - cfg.theta_critical));

  std::vector<double> y_prev(kTeamSize, 0.0), y_now(kTeamSize, 0.0);
  std::map<EntityId, std::vector<Vec2>> positions;
  std::vector<Vec2> x_pos(kTeamSize), y_pos(kTeamSize);
  Vec2 ball{0.0, 0.0};
  for (int a = 0; a < kTeamSize; ++a) {
    x_pos[a] = {-30.0 + 5.0 * (a % 5), -20.0 + 10.0 * (a / 5)};
    y_pos[a] = {30.0 - 5.0 * (a % 5), -20.0 + 10.0 * (a / 5)};
  }
  auto record = [&] {
    for (int a = 0; a < kTeamSize; ++a) {
      positions[{Side::TeamX, a + kFirstAgent}].push_back(x_pos[a]);
      positions[{Side::TeamY, a + kFirstAgent}].push_back(y_pos[a]);
    }
    positions[EntityId::ball()].push_back(ball);
  };
  auto step = [](double angle, double length) { return Vec2{length * std::cos(angle), length * std::sin(angle)}; };

  record();
  for (std::size_t t = 0; t < steps; ++t) {
    const double ball_angle = heading(rng);
    if (unit(rng) >= cfg.ball_rest) ball = ball + step(ball_angle, cfg.ball_step);
    for (int a = 0; a < kTeamSize; ++a) {
      y_now[a] = heading(rng);
      y_pos[a] = y_pos[a] + step(y_now[a], cfg.free_agent_step);
    }
    for (int a = 0; a < kTeamSize; ++a) {
      double angle = heading(rng);
      const auto& links = drivers[a];
      if (!links.empty()) {
        const auto pick = static_cast<std::size_t>(unit(rng) * static_cast<double>(links.size()));
        const Coupling& link = *links[std::min(pick, links.size() - 1)];
        if (unit(rng) < link.strength && t > 0) angle = y_prev[link.y_agent - kFirstAgent];
      }
      double length = cfg.free_agent_step;
      if (a + kFirstAgent == cfg.critical_agent) {
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        length = std::abs(cfg.critical_base + sign * branch + cfg.critical_noise * noise(rng));
      }
      x_pos[a] = x_pos[a] + step(angle, length);
    }
    std::swap(y_prev, y_now);
    record();
  }

  std::vector<long> cycle_ids(static_cast<std::size_t>(cfg.cycles));
  for (std::size_t n = 0; n < cycle_ids.size(); ++n) cycle_ids[n] = static_cast<long>(n + 1);
  return GameTrace(std::move(game_id), std::move(cycle_ids), std::move(positions));
}

GameTrace sweep_game(const SweepConfig& cfg, std::size_t theta_index, std::size_t game_index) {
  cfg.validate();
  if (theta_index >= cfg.grid.thetas.size() || game_index >= static_cast<std::size_t>(cfg.games_per_theta))
    throw Error(ErrorCode::InvalidConfig, "sweep index out of range");
  ScenarioConfig scenario = cfg.scenario;
  scenario.theta = cfg.grid.thetas[theta_index];
  return simulate_match(scenario, derive_seed(cfg.seed, theta_index, game_index),
                        "game_" + std::to_string(game_index));
}

std::map<double, std::vector<GameTrace>> sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::map<double, std::vector<GameTrace>> out;
  for (std::size_t m = 0; m < cfg.grid.thetas.size(); ++m) {
    auto& games = out[cfg.grid.thetas[m]];
    for (int g = 0; g < cfg.games_per_theta; ++g) games.push_back(sweep_game(cfg, m, static_cast<std::size_t>(g)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration files

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(const std::string& value) {
  std::string spaced = value;
  for (char& c : spaced)
    if (c == ',') c = ' ';
  std::istringstream in(spaced);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

template <typename T>
T number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorCode::InvalidConfig, "key '" + key + "': cannot parse '" + text + "'");
  return value;
}

template <typename T>
T scalar(const std::string& key, const std::string& value) {
  auto toks = tokens(value);
  if (toks.size() != 1) throw Error(ErrorCode::InvalidConfig, "key '" + key + "' expects one value");
  return number<T>(key, toks.front());
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"couplings",      "coupling",       "free_agent_step", "cycles",
                                          "theta",          "theta_critical", "ball_step",       "ball_rest",       "critical_agent",
                                          "critical_base",  "critical_noise", "grid",            "label",
                                          "games_per_theta", "seed"};
  return keys;
}

}  // namespace

ScenarioFile parse_scenario_file(std::istream& in) {
  ScenarioFile file;
  ScenarioConfig& sc = file.scenario;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidConfig, "expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().contains(key)) throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'", line_no);

    if (key == "coupling" || key == "couplings") {
      auto toks = tokens(value);
      if (toks.size() != 3)
        throw Error(ErrorCode::InvalidConfig, "key 'coupling' expects 'y_agent x_agent strength'", line_no);
      sc.couplings.push_back({number<int>(key, toks[0]), number<int>(key, toks[1]), number<double>(key, toks[2])});
    } else if (key == "free_agent_step") {
      sc.free_agent_step = scalar<double>(key, value);
    } else if (key == "cycles") {
      sc.cycles = scalar<long>(key, value);
    } else if (key == "theta") {
      sc.theta = scalar<double>(key, value);
    } else if (key == "theta_critical") {
      sc.theta_critical = scalar<double>(key, value);
    } else if (key == "ball_step") {
      sc.ball_step = scalar<double>(key, value);
    } else if (key == "ball_rest") {
      sc.ball_rest = scalar<double>(key, value);
    } else if (key == "critical_agent") {
      sc.critical_agent = scalar<int>(key, value);
    } else if (key == "critical_base") {
      sc.critical_base = scalar<double>(key, value);
    } else if (key == "critical_noise") {
      sc.critical_noise = scalar<double>(key, value);
    } else if (key == "grid") {
      SweepGrid grid = file.grid.value_or(SweepGrid{});
      grid.thetas.clear();
      for (const auto& tok : tokens(value)) grid.thetas.push_back(number<double>(key, tok));
      file.grid = std::move(grid);
    } else if (key == "label") {
      SweepGrid grid = file.grid.value_or(SweepGrid{});
      grid.label = value;
      file.grid = std::move(grid);
    } else if (key == "games_per_theta") {
      file.games_per_theta = scalar<int>(key, value);
    } else if (key == "seed") {
      file.seed = scalar<std::uint64_t>(key, value);
    }
    file.raw[key] = value;
  }
  return file;
}

ScenarioFile read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
  return parse_scenario_file(in);
}

ScenarioConfig scenario_from_file(const ScenarioFile& file) {
  if (!file.raw.contains("theta")) throw Error(ErrorCode::InvalidConfig, "missing required key 'theta'");
  file.scenario.validate();
  return file.scenario;
}

SweepConfig sweep_from_file(const ScenarioFile& file, std::optional<std::uint64_t> seed_override) {
  if (!file.raw.contains("grid")) throw Error(ErrorCode::InvalidConfig, "missing required key 'grid'");
  SweepConfig cfg;
  cfg.scenario = file.scenario;
  cfg.grid = *file.grid;
  if (file.games_per_theta) cfg.games_per_theta = *file.games_per_theta;
  if (seed_override)
    cfg.seed = *seed_override;
  else if (file.seed)
    cfg.seed = *file.seed;
  else
    throw Error(ErrorCode::InvalidConfig, "missing required key 'seed' (or pass --seed)");
  cfg.validate();
  return cfg;
}

}  // namespace infonet
