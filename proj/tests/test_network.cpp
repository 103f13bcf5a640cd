#include <doctest.h>

#include <numeric>
#include <random>

#include "infonet/error.hpp"
#include "infonet/network.hpp"
#include "infonet/simulator.hpp"

using namespace infonet;

namespace {

TEMatrix zero_matrix(std::string id) { return TEMatrix{std::move(id), Direction::YtoX, {}}; }

TEMatrix random_matrix(std::mt19937_64& rng, std::string id) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  TEMatrix m = zero_matrix(std::move(id));
  for (auto& row : m.values)
    for (auto& v : row) v = u(rng);
  return m;
}

// Matrix whose row i peaks at responders[i - 2] with the given value.
TEMatrix pointing(std::string id, const std::array<int, kTeamSize>& responders, double peak = 1.0) {
  TEMatrix m = zero_matrix(std::move(id));
  for (int i = kFirstAgent; i <= kLastAgent; ++i) m.at(i, responders[i - kFirstAgent]) = peak;
  return m;
}

GameTrace frozen_trace() {
  std::map<EntityId, std::vector<Vec2>> pos;
  for (const auto& id : all_entities()) pos[id] = std::vector<Vec2>(50, Vec2{1.0 * id.index, 2.0});
  std::vector<long> cycles(50);
  std::iota(cycles.begin(), cycles.end(), 1);
  return GameTrace("frozen", cycles, pos);
}

}  // namespace

TEST_CASE("responder_per_game") {
  TEMatrix m = zero_matrix("g");
  m.at(3, 7) = 0.4;
  m.at(3, 2) = 0.1;
  CHECK(responder_per_game(m, 3) == 7);
  m.at(4, 4) = 0.9;
  m.at(4, 9) = 0.9;
  CHECK(responder_per_game(m, 4) == 4);
  CHECK(responder_per_game(m, 5) == 2);
}

TEST_CASE("responder_mode") {
  std::vector<TEMatrix> ms;
  std::array<int, kTeamSize> base{2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  auto with = [&](int resp) {
    auto r = base;
    r[0] = resp;  // agent 2
    return r;
  };
  ms = {pointing("a", with(3)), pointing("b", with(3)), pointing("c", with(5))};
  CHECK(responder_mode(responder_table(ms), 2, ms) == 3);

  ms = {pointing("a", with(3), 0.2), pointing("b", with(5), 0.7)};
  CHECK(responder_mode(responder_table(ms), 2, ms) == 5);
  ms = {pointing("a", with(3), 0.7), pointing("b", with(5), 0.2)};
  CHECK(responder_mode(responder_table(ms), 2, ms) == 3);
  ms = {pointing("a", with(9), 0.5), pointing("b", with(5), 0.5)};
  CHECK(responder_mode(responder_table(ms), 2, ms) == 5);  // full tie -> lowest j

  ms = {pointing("solo", with(8))};
  CHECK(responder_mode(responder_table(ms), 2, ms) == 8);

  CHECK_THROWS_AS(responder_mode(ResponderTable{}, 2, {}), Error);
}

TEST_CASE("build_diagram hub selection") {
  std::array<int, kTeamSize> all6;
  all6.fill(6);
  std::vector<TEMatrix> ms{pointing("g", all6)};
  auto d = build_diagram(ms);
  CHECK(d.incoming.at(6) == 10);
  CHECK(d.hub == 6);
  CHECK_FALSE(d.hub_tiebreak_used);

  // incoming {4: 3, 7: 3, others <= 2}; links into 7 carry more TE
  std::array<int, kTeamSize> split{4, 4, 4, 7, 7, 7, 2, 2, 3, 3};
  TEMatrix m = pointing("g", split, 0.5);
  for (int i : {5, 6, 7}) m.at(i, 7) = 0.8;
  ms = {m};
  d = build_diagram(ms);
  CHECK(d.incoming.at(4) == 3);
  CHECK(d.incoming.at(7) == 3);
  CHECK(d.hub == 7);
  CHECK(d.hub_tiebreak_used);

  std::array<int, kTeamSize> distinct{11, 10, 9, 8, 7, 6, 5, 4, 3, 2};
  m = pointing("g", distinct, 0.5);
  m.at(6, 7) = 0.9;  // agent 6 points at 7 with the largest TE
  ms = {m};
  d = build_diagram(ms);
  for (const auto& [j, c] : d.incoming) CHECK(c == 1);
  CHECK(d.hub == 7);
  CHECK(d.hub_tiebreak_used);

  m = pointing("g", distinct, 0.5);
  ms = {m};
  CHECK(build_diagram(ms).hub == 2);  // equal masses -> lowest j
}

TEST_CASE("hub ties survive rescaling despite rounding in the summed TE") {
  // 4 and 7 each receive two links; masses 1 + 5 and 3 + 3 are equal, but
  // after scaling the rounded sums differ in the last bit for most c
  std::array<int, kTeamSize> split{4, 4, 7, 7, 2, 3, 5, 6, 8, 9};
  TEMatrix m = pointing("g", split, 0.5);
  m.at(2, 4) = 1.0;
  m.at(3, 4) = 5.0;
  m.at(4, 7) = 3.0;
  m.at(5, 7) = 3.0;
  for (double c : {1.0, 0.37, 0.1, 0.3, 1e-6}) {
    TEMatrix s = m;
    for (auto& row : s.values)
      for (auto& v : row) v *= c;
    std::vector<TEMatrix> ms{s};
    const auto d = build_diagram(ms);
    CHECK(d.hub == 4);
    CHECK(d.hub_tiebreak_used);
  }
}

TEST_CASE("build_diagram rejects inconsistent inputs") {
  std::mt19937_64 rng(1);
  std::vector<TEMatrix> ms{random_matrix(rng, "a"), random_matrix(rng, "b")};
  auto table = responder_table(ms);
  std::vector<TEMatrix> other{ms[0], random_matrix(rng, "c")};
  CHECK_THROWS_AS(build_diagram(table, other), Error);
  CHECK_THROWS_AS(build_diagram(table, std::span(ms).first(1)), Error);
  std::vector<TEMatrix> dup{ms[0], ms[0]};
  CHECK_THROWS_AS(responder_table(dup), Error);
  std::vector<TEMatrix> mixed = ms;
  mixed[1].direction = Direction::XtoY;
  try {
    build_diagram(mixed);
    FAIL("expected InconsistentGames");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentGames);
  }
  table.per_game["b"].erase(5);
  CHECK_THROWS_AS(build_diagram(table, ms), Error);
}

TEST_CASE("diagram invariants on random matrices") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> games(1, 6);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<TEMatrix> ms;
    const int g = games(rng);
    for (int k = 0; k < g; ++k) ms.push_back(random_matrix(rng, "g" + std::to_string(k)));
    const auto d = build_diagram(ms);
    int links = 0;
    int top = 0;
    for (const auto& [j, c] : d.incoming) {
      links += c;
      top = std::max(top, c);
    }
    CHECK(links == 10);
    CHECK(d.incoming.at(d.hub) == top);

    const auto again = build_diagram(ms);
    CHECK(again.responder == d.responder);
    CHECK(again.hub == d.hub);

    // scaling by c > 0 keeps every responder
    for (double c : {1e-6, 0.37, 3.0, 1e6}) {
      auto scaled = ms;
      for (auto& m : scaled)
        for (auto& row : m.values)
          for (auto& v : row) v *= c;
      for (std::size_t k = 0; k < ms.size(); ++k)
        for (int i = kFirstAgent; i <= kLastAgent; ++i)
          CHECK(responder_per_game(scaled[k], i) == responder_per_game(ms[k], i));
      CHECK(build_diagram(scaled).responder == d.responder);
    }

    // relabel sources by sigma and targets by pi
    std::array<int, kTeamSize> sigma, pi;
    std::iota(sigma.begin(), sigma.end(), kFirstAgent);
    std::iota(pi.begin(), pi.end(), kFirstAgent);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::shuffle(pi.begin(), pi.end(), rng);
    auto permuted = ms;
    for (std::size_t k = 0; k < ms.size(); ++k)
      for (int i = kFirstAgent; i <= kLastAgent; ++i)
        for (int j = kFirstAgent; j <= kLastAgent; ++j)
          permuted[k].at(sigma[i - 2], pi[j - 2]) = ms[k].at(i, j);
    const auto pd = build_diagram(permuted);
    for (int i = kFirstAgent; i <= kLastAgent; ++i) CHECK(pd.responder.at(sigma[i - 2]) == pi[d.responder.at(i) - 2]);
    if (!d.hub_tiebreak_used) CHECK(pd.hub == pi[d.hub - 2]);
  }
}

TEST_CASE("te_matrix on a frozen game is exactly zero") {
  const auto m = te_matrix(frozen_trace(), SymbolizerConfig{}, EstimatorConfig{});
  for (const auto& row : m.values)
    for (double v : row) CHECK(v == 0.0);
  CHECK(m.game_id == "frozen");
}

TEST_CASE("te_matrix equals independent estimator calls in both directions") {
  ScenarioConfig cfg;
  cfg.cycles = 400;
  const auto trace = simulate_match(cfg, 5);
  const SymbolizerConfig sym;
  const EstimatorConfig est{1};
  auto series = [&](Side s, int i) { return symbolize(increments_of(trace, {s, i}), sym); };
  const auto ball = symbolize(increments_of(trace, EntityId::ball()), sym);
  for (auto dir : {Direction::YtoX, Direction::XtoY}) {
    const auto m = te_matrix(trace, sym, est, dir);
    CHECK(m.direction == dir);
    for (int i = kFirstAgent; i <= kLastAgent; ++i)
      for (int j = kFirstAgent; j <= kLastAgent; ++j)
        CHECK(m.at(i, j) ==
              conditional_transfer_entropy(series(target_side(dir), j), series(source_side(dir), i), ball, est));
  }
}

TEST_CASE("a copied motion symbol makes the coupled entry the strict row maximum") {
  ScenarioConfig cfg;
  cfg.couplings = {{3, 5, 1.0}};
  cfg.cycles = 6000;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = te_matrix(simulate_match(cfg, seed), SymbolizerConfig{}, EstimatorConfig{});
    for (int j = kFirstAgent; j <= kLastAgent; ++j)
      if (j != 5) CHECK(m.at(3, 5) > m.at(3, j));
  }
}
