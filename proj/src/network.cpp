#include "infonet/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "infonet/error.hpp"

namespace infonet {

std::string_view to_string(Direction d) { return d == Direction::YtoX ? "y2x" : "x2y"; }

Direction direction_from_string(std::string_view s) {
  if (s == "y2x") return Direction::YtoX;
  if (s == "x2y") return Direction::XtoY;
  throw Error(ErrorCode::InvalidConfig, "--direction must be y2x or x2y, got '" + std::string(s) + "'");
}

Side source_side(Direction d) { return d == Direction::YtoX ? Side::TeamY : Side::TeamX; }
Side target_side(Direction d) { return d == Direction::YtoX ? Side::TeamX : Side::TeamY; }

TEMatrix te_matrix(const GameTrace& trace, const SymbolizerConfig& sym_cfg, const EstimatorConfig& est_cfg,
                   Direction direction) {
  sym_cfg.validate();
  est_cfg.validate();
  auto symbols_of = [&](const EntityId& id) { return symbolize(increments_of(trace, id), sym_cfg); };

  std::vector<SymbolSeries> sources, targets;
  for (int a = kFirstAgent; a <= kLastAgent; ++a) {
    sources.push_back(symbols_of({source_side(direction), a}));
    targets.push_back(symbols_of({target_side(direction), a}));
  }
  const SymbolSeries ball = symbols_of(EntityId::ball());

  TEMatrix m{trace.game_id(), direction, {}};
  for (int i = 0; i < kTeamSize; ++i)
    for (int j = 0; j < kTeamSize; ++j)
      m.values[i][j] = conditional_transfer_entropy(targets[j], sources[i], ball, est_cfg);
  return m;
}

int responder_per_game(const TEMatrix& m, int i) {
  const auto& row = m.values.at(static_cast<std::size_t>(i - kFirstAgent));
  // max_element keeps the first of equal maxima
  return kFirstAgent + static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
}

ResponderTable responder_table(std::span<const TEMatrix> matrices) {
  ResponderTable table;
  for (const auto& m : matrices) {
    if (table.per_game.contains(m.game_id))
      throw Error(ErrorCode::InconsistentGames, "duplicate game id '" + m.game_id + "'");
    table.games.push_back(m.game_id);
    auto& row = table.per_game[m.game_id];
    for (int i = kFirstAgent; i <= kLastAgent; ++i) row[i] = responder_per_game(m, i);
  }
  return table;
}

namespace {

double mean_te(std::span<const TEMatrix> matrices, int i, int j) {
  double sum = 0.0;
  for (const auto& m : matrices) sum += m.at(i, j);
  return sum / static_cast<double>(matrices.size());
}

// Tie-break sums are accumulated from rounded entries, so two sums that are
// equal in exact arithmetic can differ in the last bits (and the difference
// is not preserved under rescaling). Differences below this relative size
// count as ties.
constexpr double kTieTolerance = 1e-12;

bool clearly_greater(double a, double b) {
  return a - b > kTieTolerance * std::max(std::abs(a), std::abs(b));
}

int responder_of(const ResponderTable& table, const std::string& game, int i) {
  auto g = table.per_game.find(game);
  if (g == table.per_game.end())
    throw Error(ErrorCode::InconsistentGames, "responder table lacks game '" + game + "'");
  auto r = g->second.find(i);
  if (r == g->second.end() || r->second < kFirstAgent || r->second > kLastAgent)
    throw Error(ErrorCode::InconsistentGames,
                "game '" + game + "' has no valid responder for agent " + std::to_string(i));
  return r->second;
}

}  // namespace

int responder_mode(const ResponderTable& table, int i, std::span<const TEMatrix> matrices) {
  if (table.games.empty()) throw Error(ErrorCode::InconsistentGames, "responder table covers no games");
  std::map<int, int> freq;
  for (const auto& game : table.games) ++freq[responder_of(table, game, i)];

  int best = 0;
  int best_count = -1;
  double best_mean = 0.0;
  for (const auto& [j, count] : freq) {  // ascending j, so strict comparisons keep the lowest
    const double mean = matrices.empty() ? 0.0 : mean_te(matrices, i, j);
    if (count > best_count || (count == best_count && clearly_greater(mean, best_mean))) {
      best = j;
      best_count = count;
      best_mean = mean;
    }
  }
  return best;
}

InteractionDiagram build_diagram(const ResponderTable& table, std::span<const TEMatrix> matrices) {
  if (table.games.empty() || matrices.size() != table.games.size())
    throw Error(ErrorCode::InconsistentGames, "responder table and matrices cover different game sets");
  std::set<std::string> seen;
  for (std::size_t g = 0; g < matrices.size(); ++g) {
    if (matrices[g].game_id != table.games[g] || !seen.insert(table.games[g]).second)
      throw Error(ErrorCode::InconsistentGames, "game order mismatch or duplicate at '" + table.games[g] + "'");
    if (matrices[g].direction != matrices.front().direction)
      throw Error(ErrorCode::InconsistentGames, "matrices mix directions");
  }

  InteractionDiagram d;
  d.direction = matrices.front().direction;
  d.games = table.games;
  for (int j = kFirstAgent; j <= kLastAgent; ++j) d.incoming[j] = 0;
  std::map<int, double> mass;
  for (int i = kFirstAgent; i <= kLastAgent; ++i) {
    const int j = responder_mode(table, i, matrices);
    d.responder[i] = j;
    ++d.incoming[j];
    mass[j] += mean_te(matrices, i, j);
  }

  const int top = std::max_element(d.incoming.begin(), d.incoming.end(), [](const auto& a, const auto& b) {
                    return a.second < b.second;
                  })->second;
  int contenders = 0;
  double best_mass = 0.0;
  for (const auto& [j, count] : d.incoming) {
    if (count != top) continue;
    if (contenders == 0 || clearly_greater(mass[j], best_mass)) {
      d.hub = j;
      best_mass = mass[j];
    }
    ++contenders;
  }
  d.hub_tiebreak_used = contenders > 1;
  return d;
}

}  // namespace infonet
