#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace infonet {

inline constexpr int kFirstAgent = 2;
inline constexpr int kLastAgent = 11;
inline constexpr int kTeamSize = kLastAgent - kFirstAgent + 1;
inline constexpr std::size_t kEntityCount = 2 * kTeamSize + 1;

// TeamX is "our" team (side L in trace files), TeamY the opponent (side R).
enum class Side : std::uint8_t { TeamX, TeamY, Ball };

struct EntityId {
  Side side = Side::Ball;
  int index = 0;  // 2..11 for agents, 0 for the ball

  static EntityId ball() { return {Side::Ball, 0}; }
  static EntityId agent(Side side, int index);

  bool is_agent() const { return side != Side::Ball; }
  auto operator<=>(const EntityId&) const = default;
};

std::string to_string(const EntityId& id);

// All 21 entities in canonical order: X2..X11, Y2..Y11, ball.
const std::vector<EntityId>& all_entities();

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }

// Positional record of one game. Construction validates every invariant:
// N >= 2 strictly increasing cycle numbers, all 21 entities present with
// exactly N samples.
class GameTrace {
 public:
  GameTrace(std::string game_id, std::vector<long> cycle_ids,
            std::map<EntityId, std::vector<Vec2>> positions);

  const std::string& game_id() const { return game_id_; }
  std::size_t cycles() const { return cycle_ids_.size(); }
  const std::vector<long>& cycle_ids() const { return cycle_ids_; }
  const std::vector<Vec2>& positions(const EntityId& id) const;
  const std::map<EntityId, std::vector<Vec2>>& entities() const { return positions_; }

  bool operator==(const GameTrace&) const = default;

 private:
  std::string game_id_;
  std::vector<long> cycle_ids_;
  std::map<EntityId, std::vector<Vec2>> positions_;
};

enum class TraceFormat { Csv, Jsonl };

std::optional<TraceFormat> trace_format_from_path(const std::filesystem::path& path);

GameTrace parse_trace(std::istream& in, TraceFormat format, std::string game_id);

// Reads a trace file; the game id is the file stem. The format is taken from
// the extension unless given explicitly.
GameTrace read_trace_file(const std::filesystem::path& path,
                          std::optional<TraceFormat> format = std::nullopt);

// Rows are written cycle by cycle in canonical entity order. Coordinates use
// the shortest decimal form that round-trips.
void write_trace(std::ostream& out, const GameTrace& trace, TraceFormat format);

struct IncrementSeries {
  EntityId entity;
  std::vector<Vec2> deltas;  // length N-1, meters per cycle
};

IncrementSeries increments_of(const GameTrace& trace, const EntityId& id);
std::map<EntityId, IncrementSeries> compute_increments(const GameTrace& trace);

struct SymbolizerConfig {
  double stationary_threshold = 0.05;  // meters
  int sectors = 8;

  void validate() const;
};

using Symbol = std::uint8_t;

// Symbol 0 is the stationary state S; direction sector m is symbol m + 1.
inline constexpr Symbol kStationary = 0;
inline constexpr Symbol direction_symbol(int sector) { return static_cast<Symbol>(sector + 1); }

struct SymbolSeries {
  EntityId entity;
  int alphabet_size = 0;
  std::vector<Symbol> symbols;
};

Symbol symbolize_delta(Vec2 delta, const SymbolizerConfig& cfg);
SymbolSeries symbolize(const IncrementSeries& inc, const SymbolizerConfig& cfg);

}  // namespace infonet
