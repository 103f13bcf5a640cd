#include "infonet/json_io.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "infonet/error.hpp"

namespace infonet {

std::string format_sig12(double v) {
  std::array<char, 40> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
  return std::string(buf.data(), ptr);
}

double round_sig12(double v) {
  if (!std::isfinite(v)) return v;
  const std::string text = format_sig12(v);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaMismatch, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) schema("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing field '") + key + "'");
  return *it;
}

int agent_index(const json& v, const char* what) {
  if (!v.is_number_integer()) schema(std::string(what) + " must be an integer agent index");
  const int idx = v.get<int>();
  if (idx < kFirstAgent || idx > kLastAgent) schema(std::string(what) + " outside 2..11");
  return idx;
}

int agent_key(const std::string& key) {
  int idx = 0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
  if (ec != std::errc() || ptr != key.data() + key.size() || idx < kFirstAgent || idx > kLastAgent)
    schema("agent key '" + key + "' outside 2..11");
  return idx;
}

Direction direction_field(const json& j) {
  const json& d = field(j, "direction");
  if (!d.is_string()) schema("direction must be a string");
  const auto s = d.get<std::string>();
  if (s != "y2x" && s != "x2y") schema("unknown direction '" + s + "'");
  return direction_from_string(s);
}

std::vector<double> number_array(const json& v, const char* what) {
  if (!v.is_array()) schema(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) schema(std::string(what) + " must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

ordered_json to_json(const TEMatrix& m) {
  ordered_json agents = ordered_json::array();
  for (int a = kFirstAgent; a <= kLastAgent; ++a) agents.push_back(a);
  ordered_json rows = ordered_json::array();
  for (const auto& row : m.values) {
    ordered_json r = ordered_json::array();
    for (double v : row) r.push_back(round_sig12(v));
    rows.push_back(std::move(r));
  }
  ordered_json out;
  out["game_id"] = m.game_id;
  out["direction"] = std::string(to_string(m.direction));
  out["agents"] = std::move(agents);
  out["te"] = std::move(rows);
  return out;
}

TEMatrix matrix_from_json(const json& j) {
  TEMatrix m;
  const json& id = field(j, "game_id");
  if (!id.is_string()) schema("game_id must be a string");
  m.game_id = id.get<std::string>();
  m.direction = direction_field(j);
  const json& rows = field(j, "te");
  if (!rows.is_array() || rows.size() != kTeamSize) schema("te must be a 10x10 array");
  for (std::size_t i = 0; i < kTeamSize; ++i) {
    auto row = number_array(rows[i], "te row");
    if (row.size() != kTeamSize) schema("te must be a 10x10 array");
    for (std::size_t k = 0; k < kTeamSize; ++k) {
      if (!std::isfinite(row[k]) || row[k] < -1e-12) schema("te entries must be finite and >= 0");
      m.values[i][k] = row[k];
    }
  }
  return m;
}

ordered_json to_json(const InteractionDiagram& d) {
  ordered_json responder = ordered_json::object();
  for (const auto& [i, j] : d.responder) responder[std::to_string(i)] = j;
  ordered_json incoming = ordered_json::object();
  for (const auto& [j, c] : d.incoming) incoming[std::to_string(j)] = c;
  ordered_json out;
  out["direction"] = std::string(to_string(d.direction));
  out["responder"] = std::move(responder);
  out["incoming"] = std::move(incoming);
  out["hub"] = d.hub;
  out["hub_tiebreak_used"] = d.hub_tiebreak_used;
  out["games"] = d.games;
  return out;
}

InteractionDiagram diagram_from_json(const json& j) {
  InteractionDiagram d;
  d.direction = direction_field(j);
  const json& responder = field(j, "responder");
  const json& incoming = field(j, "incoming");
  if (!responder.is_object() || !incoming.is_object()) schema("responder and incoming must be objects");
  for (const auto& [key, v] : responder.items()) d.responder[agent_key(key)] = agent_index(v, "responder");
  int links = 0;
  for (const auto& [key, v] : incoming.items()) {
    if (!v.is_number_integer() || v.get<int>() < 0) schema("incoming counts must be non-negative integers");
    d.incoming[agent_key(key)] = v.get<int>();
    links += v.get<int>();
  }
  if (d.responder.size() != kTeamSize) schema("responder must map every agent 2..11");
  if (links != kTeamSize) schema("incoming counts must sum to 10");
  d.hub = agent_index(field(j, "hub"), "hub");
  const json& tb = field(j, "hub_tiebreak_used");
  if (!tb.is_boolean()) schema("hub_tiebreak_used must be a boolean");
  d.hub_tiebreak_used = tb.get<bool>();
  const json& games = field(j, "games");
  if (!games.is_array()) schema("games must be an array");
  for (const auto& g : games) {
    if (!g.is_string()) schema("games must contain strings");
    d.games.push_back(g.get<std::string>());
  }
  return d;
}

ordered_json to_json(const FisherCurve& c) {
  ordered_json grid = ordered_json::array();
  ordered_json values = ordered_json::array();
  for (double t : c.grid.thetas) grid.push_back(round_sig12(t));
  for (double v : c.values) values.push_back(round_sig12(v));
  ordered_json out;
  out["parameter"] = c.grid.label;
  out["grid"] = std::move(grid);
  out["fisher"] = std::move(values);
  out["theta_star"] = round_sig12(c.theta_star);
  out["hub"] = c.hub ? ordered_json(*c.hub) : ordered_json(nullptr);
  out["beta"] = round_sig12(c.beta);
  return out;
}

FisherCurve fisher_from_json(const json& j) {
  FisherCurve c;
  const json& label = field(j, "parameter");
  if (!label.is_string()) schema("parameter must be a string");
  c.grid.label = label.get<std::string>();
  c.grid.thetas = number_array(field(j, "grid"), "grid");
  c.values = number_array(field(j, "fisher"), "fisher");
  if (c.values.size() != c.grid.thetas.size()) schema("grid and fisher differ in length");
  try {
    c.grid.validate();
  } catch (const Error& e) {
    schema(e.what());
  }
  const json& star = field(j, "theta_star");
  if (!star.is_number()) schema("theta_star must be a number");
  c.theta_star = star.get<double>();
  const json& hub = field(j, "hub");
  if (!hub.is_null()) c.hub = agent_index(hub, "hub");
  const json& beta = field(j, "beta");
  if (!beta.is_number()) schema("beta must be a number");
  c.beta = beta.get<double>();
  return c;
}

std::string fisher_csv(const FisherCurve& c) {
  std::string out = "theta,fisher\n";
  for (std::size_t m = 0; m < c.values.size(); ++m)
    out += format_sig12(c.grid.thetas[m]) + "," + format_sig12(c.values[m]) + "\n";
  return out;
}

}  // namespace infonet
