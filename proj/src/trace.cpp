#include "infonet/trace.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <string_view>

#include <json.hpp>

#include "infonet/error.hpp"

namespace infonet {

EntityId EntityId::agent(Side side, int index) {
  if (side == Side::Ball) throw Error(ErrorCode::RosterViolation, "ball has no agent index");
  if (index < kFirstAgent || index > kLastAgent)
    throw Error(ErrorCode::RosterViolation,
                "agent index " + std::to_string(index) + " outside 2..11");
  return {side, index};
}

std::string to_string(const EntityId& id) {
  switch (id.side) {
    case Side::TeamX: return "X" + std::to_string(id.index);
    case Side::TeamY: return "Y" + std::to_string(id.index);
    case Side::Ball: return "ball";
  }
  return "?";
}

const std::vector<EntityId>& all_entities() {
  static const std::vector<EntityId> entities = [] {
    std::vector<EntityId> out;
    for (Side side : {Side::TeamX, Side::TeamY})
      for (int i = kFirstAgent; i <= kLastAgent; ++i) out.push_back({side, i});
    out.push_back(EntityId::ball());
    return out;
  }();
  return entities;
}

namespace {

std::size_t slot_of(const EntityId& id) {
  switch (id.side) {
    case Side::TeamX: return static_cast<std::size_t>(id.index - kFirstAgent);
    case Side::TeamY: return static_cast<std::size_t>(kTeamSize + id.index - kFirstAgent);
    case Side::Ball: return kEntityCount - 1;
  }
  return kEntityCount;
}

bool valid_id(const EntityId& id) {
  if (id.side == Side::Ball) return id.index == 0;
  return id.index >= kFirstAgent && id.index <= kLastAgent;
}

}  // namespace

GameTrace::GameTrace(std::string game_id, std::vector<long> cycle_ids,
                     std::map<EntityId, std::vector<Vec2>> positions)
    : game_id_(std::move(game_id)), cycle_ids_(std::move(cycle_ids)), positions_(std::move(positions)) {
  if (cycle_ids_.size() < 2)
    throw Error(ErrorCode::SeriesTooShort, "a trace needs at least 2 cycles");
  if (std::adjacent_find(cycle_ids_.begin(), cycle_ids_.end(), std::greater_equal<>()) !=
      cycle_ids_.end())
    throw Error(ErrorCode::MalformedRow, "cycle numbers must be strictly increasing");
  for (const auto& [id, series] : positions_) {
    if (!valid_id(id)) throw Error(ErrorCode::RosterViolation, "invalid entity " + to_string(id));
    if (series.size() != cycle_ids_.size())
      throw Error(ErrorCode::MissingEntity, to_string(id) + " has " + std::to_string(series.size()) +
                                                " samples, expected " +
                                                std::to_string(cycle_ids_.size()));
  }
  for (const auto& id : all_entities())
    if (!positions_.contains(id)) throw Error(ErrorCode::MissingEntity, to_string(id) + " absent");
}

const std::vector<Vec2>& GameTrace::positions(const EntityId& id) const {
  auto it = positions_.find(id);
  if (it == positions_.end()) throw Error(ErrorCode::MissingEntity, to_string(id) + " absent");
  return it->second;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Sample {
  long cycle = 0;
  EntityId id;
  Vec2 pos;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

EntityId make_entity(std::string_view side, std::optional<long> index, std::size_t line) {
  if (side == "B") {
    if (index) throw Error(ErrorCode::RosterViolation, "ball row carries an agent index", line);
    return EntityId::ball();
  }
  Side s;
  if (side == "L")
    s = Side::TeamX;
  else if (side == "R")
    s = Side::TeamY;
  else
    throw Error(ErrorCode::MalformedRow, "side must be L, R or B, got '" + std::string(side) + "'", line);
  if (!index) throw Error(ErrorCode::MalformedRow, "agent row without index", line);
  if (*index < kFirstAgent || *index > kLastAgent)
    throw Error(ErrorCode::RosterViolation, "agent index " + std::to_string(*index) + " outside 2..11",
                line);
  return {s, static_cast<int>(*index)};
}

Sample parse_csv_row(std::string_view line, std::size_t line_no) {
  std::array<std::string_view, 5> fields;
  std::size_t count = 0;
  while (true) {
    auto comma = line.find(',');
    if (count == fields.size()) throw Error(ErrorCode::MalformedRow, "expected 5 fields", line_no);
    fields[count++] = trim(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (count != fields.size()) throw Error(ErrorCode::MalformedRow, "expected 5 fields", line_no);

  auto cycle = parse_number<long>(fields[0]);
  if (!cycle) throw Error(ErrorCode::MalformedRow, "bad cycle '" + std::string(fields[0]) + "'", line_no);
  std::optional<long> index;
  if (!fields[2].empty()) {
    index = parse_number<long>(fields[2]);
    if (!index) throw Error(ErrorCode::MalformedRow, "bad index '" + std::string(fields[2]) + "'", line_no);
  }
  auto x = parse_number<double>(fields[3]);
  auto y = parse_number<double>(fields[4]);
  if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y))
    throw Error(ErrorCode::MalformedRow, "bad coordinates", line_no);
  return {*cycle, make_entity(fields[1], index, line_no), {*x, *y}};
}

Sample parse_jsonl_row(std::string_view line, std::size_t line_no) {
  using nlohmann::json;
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedRow, std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!obj.is_object()) throw Error(ErrorCode::MalformedRow, "expected a JSON object", line_no);
  auto require = [&](const char* key) -> const json& {
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(ErrorCode::MalformedRow, std::string("missing field ") + key, line_no);
    return *it;
  };
  const json& cycle = require("cycle");
  const json& side = require("side");
  const json& x = require("x");
  const json& y = require("y");
  if (!cycle.is_number_integer() || !side.is_string() || !x.is_number() || !y.is_number())
    throw Error(ErrorCode::MalformedRow, "field of wrong type", line_no);
  std::optional<long> index;
  if (auto it = obj.find("index"); it != obj.end() && !it->is_null()) {
    if (it->is_number_integer())
      index = it->get<long>();
    else if (!(it->is_string() && it->get<std::string>().empty()))
      throw Error(ErrorCode::MalformedRow, "index must be an integer", line_no);
  }
  return {cycle.get<long>(), make_entity(side.get<std::string>(), index, line_no),
          {x.get<double>(), y.get<double>()}};
}

}  // namespace

GameTrace parse_trace(std::istream& in, TraceFormat format, std::string game_id) {
  // cycle -> one optional sample per entity slot
  std::map<long, std::array<std::optional<Vec2>, kEntityCount>> by_cycle;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = format == TraceFormat::Jsonl;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char c : view)
        if (c != ' ' && c != '\t') compact += c;
      if (compact != "cycle,side,index,x,y")
        throw Error(ErrorCode::MalformedRow, "expected header 'cycle,side,index,x,y'", line_no);
      header_seen = true;
      continue;
    }
    Sample s = format == TraceFormat::Csv ? parse_csv_row(view, line_no) : parse_jsonl_row(view, line_no);
    auto& slot = by_cycle[s.cycle][slot_of(s.id)];
    if (slot)
      throw Error(ErrorCode::DuplicateSample,
                  to_string(s.id) + " at cycle " + std::to_string(s.cycle) + " appears twice", line_no);
    slot = s.pos;
  }
  if (!header_seen) throw Error(ErrorCode::MalformedRow, "empty trace: header missing");

  const auto& entities = all_entities();
  std::vector<long> cycle_ids;
  std::map<EntityId, std::vector<Vec2>> positions;
  for (const auto& id : entities) positions[id].reserve(by_cycle.size());
  for (const auto& [cycle, slots] : by_cycle) {
    cycle_ids.push_back(cycle);
    for (std::size_t k = 0; k < kEntityCount; ++k) {
      if (!slots[k])
        throw Error(ErrorCode::MissingEntity,
                    to_string(entities[k]) + " absent at cycle " + std::to_string(cycle));
      positions[entities[k]].push_back(*slots[k]);
    }
  }
  return GameTrace(std::move(game_id), std::move(cycle_ids), std::move(positions));
}

std::optional<TraceFormat> trace_format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".csv") return TraceFormat::Csv;
  if (ext == ".jsonl") return TraceFormat::Jsonl;
  return std::nullopt;
}

GameTrace read_trace_file(const std::filesystem::path& path, std::optional<TraceFormat> format) {
  if (!format) format = trace_format_from_path(path);
  if (!format) throw Error(ErrorCode::Io, "cannot infer trace format of " + path.string());
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_trace(in, *format, path.stem().string());
}

// ---------------------------------------------------------------------------
// Writing

namespace {

std::string shortest(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

char side_code(Side side) {
  switch (side) {
    case Side::TeamX: return 'L';
    case Side::TeamY: return 'R';
    case Side::Ball: return 'B';
  }
  return '?';
}

}  // namespace

void write_trace(std::ostream& out, const GameTrace& trace, TraceFormat format) {
  const auto& entities = all_entities();
  std::vector<const std::vector<Vec2>*> series;
  for (const auto& id : entities) series.push_back(&trace.positions(id));

  if (format == TraceFormat::Csv) out << "cycle,side,index,x,y\n";
  for (std::size_t n = 0; n < trace.cycles(); ++n) {
    const long cycle = trace.cycle_ids()[n];
    for (std::size_t k = 0; k < entities.size(); ++k) {
      const auto& id = entities[k];
      const Vec2 p = (*series[k])[n];
      if (format == TraceFormat::Csv) {
        out << cycle << ',' << side_code(id.side) << ',';
        if (id.is_agent()) out << id.index;
        out << ',' << shortest(p.x) << ',' << shortest(p.y) << '\n';
      } else {
        out << "{\"cycle\":" << cycle << ",\"side\":\"" << side_code(id.side) << "\",\"index\":";
        if (id.is_agent())
          out << id.index;
        else
          out << "null";
        out << ",\"x\":" << shortest(p.x) << ",\"y\":" << shortest(p.y) << "}\n";
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Increments and symbols

IncrementSeries increments_of(const GameTrace& trace, const EntityId& id) {
  const auto& pos = trace.positions(id);
  IncrementSeries inc{id, {}};
  inc.deltas.reserve(pos.size() - 1);
  for (std::size_t n = 0; n + 1 < pos.size(); ++n) inc.deltas.push_back(pos[n + 1] - pos[n]);
  return inc;
}

std::map<EntityId, IncrementSeries> compute_increments(const GameTrace& trace) {
  std::map<EntityId, IncrementSeries> out;
  for (const auto& [id, pos] : trace.entities()) out.emplace(id, increments_of(trace, id));
  return out;
}

void SymbolizerConfig::validate() const {
  if (!(stationary_threshold >= 0.0) || !std::isfinite(stationary_threshold))
    throw Error(ErrorCode::InvalidConfig, "--epsilon: stationary threshold must be >= 0");
  if (sectors < 2 || sectors > 254)
    throw Error(ErrorCode::InvalidConfig, "--sectors: sector count must be in 2..254");
}

Symbol symbolize_delta(Vec2 delta, const SymbolizerConfig& cfg) {
  if (std::hypot(delta.x, delta.y) <= cfg.stationary_threshold) return kStationary;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double angle = std::atan2(delta.y, delta.x);
  if (angle < 0.0) angle += two_pi;
  int sector = static_cast<int>(std::floor(cfg.sectors * angle / two_pi));
  // angle + 2*pi can round up to exactly 2*pi for tiny negative angles
  sector = std::clamp(sector, 0, cfg.sectors - 1);
  return direction_symbol(sector);
}

SymbolSeries symbolize(const IncrementSeries& inc, const SymbolizerConfig& cfg) {
  cfg.validate();
  SymbolSeries out{inc.entity, cfg.sectors + 1, {}};
  out.symbols.reserve(inc.deltas.size());
  for (const Vec2& d : inc.deltas) out.symbols.push_back(symbolize_delta(d, cfg));
  return out;
}

}  // namespace infonet
