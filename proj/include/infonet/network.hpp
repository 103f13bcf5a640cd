#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infonet/estimators.hpp"
#include "infonet/trace.hpp"

namespace infonet {

// YtoX: opponent agents (team Y) are sources, our agents (team X) targets.
enum class Direction { YtoX, XtoY };

std::string_view to_string(Direction d);  // "y2x" / "x2y"
Direction direction_from_string(std::string_view s);
Side source_side(Direction d);
Side target_side(Direction d);

struct TEMatrix {
  std::string game_id;
  Direction direction = Direction::YtoX;
  // values[i - 2][j - 2] = T(source_i -> target_j | ball), bits
  std::array<std::array<double, kTeamSize>, kTeamSize> values{};

  double at(int i, int j) const { return values[i - kFirstAgent][j - kFirstAgent]; }
  double& at(int i, int j) { return values[i - kFirstAgent][j - kFirstAgent]; }
};

TEMatrix te_matrix(const GameTrace& trace, const SymbolizerConfig& sym_cfg, const EstimatorConfig& est_cfg,
                   Direction direction = Direction::YtoX);

// Argmax of row i; ties go to the lowest j.
int responder_per_game(const TEMatrix& m, int i);

struct ResponderTable {
  std::vector<std::string> games;
  std::map<std::string, std::map<int, int>> per_game;  // game -> i -> J(i, g)
};

ResponderTable responder_table(std::span<const TEMatrix> matrices);

// Most frequent per-game responder of i. Ties go to the candidate with the
// highest mean TE(i, j) across `matrices`, then to the lowest j. Means
// within a relative 1e-12 of each other count as equal.
int responder_mode(const ResponderTable& table, int i, std::span<const TEMatrix> matrices);

struct InteractionDiagram {
  Direction direction = Direction::YtoX;
  std::map<int, int> responder;  // i -> J(i)
  std::map<int, int> incoming;   // j -> number of i with J(i) = j, every j in 2..11
  int hub = kFirstAgent;
  bool hub_tiebreak_used = false;
  std::vector<std::string> games;
};

// Hub ties are broken by the largest summed mean TE of the links pointing at
// j (again with a relative 1e-12 tie band), then by the lowest j. Throws InconsistentGames when table and matrices
// disagree on the game set or the matrices mix directions.
InteractionDiagram build_diagram(const ResponderTable& table, std::span<const TEMatrix> matrices);

inline InteractionDiagram build_diagram(std::span<const TEMatrix> matrices) {
  return build_diagram(responder_table(matrices), matrices);
}

}  // namespace infonet
