#include <doctest.h>

#include <random>

#include "fisher_families.hpp"
#include "infonet/error.hpp"
#include "infonet/fisher.hpp"

using namespace infonet;

namespace {

SymbolSeries series(int alphabet, std::vector<Symbol> symbols) {
  return SymbolSeries{EntityId::ball(), alphabet, std::move(symbols)};
}

ProbVector exact(std::vector<double> p) { return ProbVector{std::move(p), 0, 0.0}; }

}  // namespace

TEST_CASE("estimate_distribution formula") {
  std::vector<SymbolSeries> all_s{series(9, std::vector<Symbol>(100, kStationary))};
  CHECK_THROWS_AS(estimate_distribution(all_s, 0.0), Error);
  auto pv = estimate_distribution(all_s, 0.5);
  CHECK(pv.probs[0] == doctest::Approx(100.5 / 104.5).epsilon(1e-15));
  CHECK(pv.probs[3] == doctest::Approx(0.5 / 104.5).epsilon(1e-15));
  CHECK(pv.sample_count == 100);
  CHECK(pv.smoothing_beta == 0.5);

  std::vector<Symbol> uniform;
  for (int rep = 0; rep < 7; ++rep)
    for (Symbol s = 0; s < 9; ++s) uniform.push_back(s);
  for (double beta : {0.0, 0.5, 3.0}) {
    std::vector<SymbolSeries> ens{series(9, uniform)};
    for (double p : estimate_distribution(ens, beta).probs) CHECK(p == doctest::Approx(1.0 / 9));
  }

  // pooled over two series: counts {a: 3, b: 1}
  std::vector<SymbolSeries> pooled{series(2, {0, 0}), series(2, {0, 1})};
  CHECK(estimate_distribution(pooled, 0.5).probs[0] == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("estimate_distribution errors") {
  CHECK_THROWS_AS(estimate_distribution({}, 0.5), Error);
  std::vector<SymbolSeries> empty{series(3, {})};
  try {
    estimate_distribution(empty, 0.5);
    FAIL("expected EmptyEnsemble");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyEnsemble);
  }
  std::vector<SymbolSeries> mixed{series(3, {0}), series(4, {1})};
  CHECK_THROWS_AS(estimate_distribution(mixed, 0.5), Error);
  std::vector<SymbolSeries> outside{series(3, {5})};
  CHECK_THROWS_AS(estimate_distribution(outside, 0.5), Error);
  std::vector<SymbolSeries> ok{series(3, {0, 1, 2})};
  CHECK_THROWS_AS(estimate_distribution(ok, -1.0), Error);
}

TEST_CASE("fisher_curve on identical distributions is zero") {
  const SweepGrid grid{{0.1, 0.2, 0.4, 0.8}, "t"};
  std::vector<ProbVector> d(4, exact({0.2, 0.3, 0.5}));
  const auto c = fisher_curve(grid, d);
  for (double v : c.values) CHECK(v == 0.0);
  CHECK(c.theta_star == 0.1);
}

TEST_CASE("Bernoulli family with exact probabilities") {
  const SweepGrid grid{{0.3, 0.5, 0.7}};
  std::vector<ProbVector> d;
  for (double t : grid.thetas) d.push_back(exact({1 - t, t}));
  const auto c = fisher_curve(grid, d);
  CHECK(c.values[1] == doctest::Approx(4.0).epsilon(1e-12));
  // one-sided ends: slope 1, F = 1/p + 1/(1-p)
  CHECK(c.values[0] == doctest::Approx(1 / 0.3 + 1 / 0.7).epsilon(1e-12));
  CHECK(c.values[2] == doctest::Approx(c.values[0]).epsilon(1e-12));
}

TEST_CASE("grid validation") {
  std::vector<ProbVector> two(2, exact({0.5, 0.5}));
  try {
    fisher_curve(SweepGrid{{0.1, 0.2}}, two);
    FAIL("expected GridTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridTooSmall);
  }
  std::vector<ProbVector> three(3, exact({0.5, 0.5}));
  CHECK_THROWS_AS(fisher_curve(SweepGrid{{0.1, 0.1, 0.2}}, three), Error);
  CHECK_THROWS_AS(fisher_curve(SweepGrid{{0.3, 0.2, 0.1}}, three), Error);
  CHECK_THROWS_AS(fisher_curve(SweepGrid{{0.1, 0.2, 0.3}}, std::span(three).first(2)), Error);
  std::vector<ProbVector> zero{exact({1.0, 0.0}), exact({0.5, 0.5}), exact({0.5, 0.5})};
  CHECK_THROWS_AS(fisher_curve(SweepGrid{{0.1, 0.2, 0.3}}, zero), Error);

  std::map<double, std::vector<SymbolSeries>> sweep{{0.1, {series(2, {0, 1})}}, {0.2, {}}, {0.3, {series(2, {1})}}};
  CHECK_THROWS_AS(fisher_curve(sweep, 0.5), Error);
}

TEST_CASE("select_theta_star") {
  const std::vector<double> t{1, 2, 3};
  CHECK(select_theta_star(t, std::vector<double>{0.1, 2.0, 0.4}) == 2);
  CHECK(select_theta_star(t, std::vector<double>{0.5, 0.5, 0.5}) == 1);
  CHECK(select_theta_star(t, std::vector<double>{0.1, 0.2, 0.3}) == 3);
}

TEST_CASE("curve properties on random smooth families") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    // p_s(theta) proportional to w_s + v_s * theta with theta in [0, 1]
    const int alphabet = 2 + rep % 6;
    std::vector<double> w(alphabet), v(alphabet);
    for (int s = 0; s < alphabet; ++s) {
      w[s] = 0.5 + 0.5 * u(rng);
      v[s] = 0.5 * u(rng) - 0.25;
    }
    SweepGrid grid;
    double theta = 0.0;
    for (int m = 0; m < 6; ++m) grid.thetas.push_back(theta += 0.05 + 0.2 * u(rng));  // theta <= 1.5
    std::vector<ProbVector> d;
    for (double t : grid.thetas) {
      std::vector<double> p(alphabet);
      double z = 0.0;
      for (int s = 0; s < alphabet; ++s) z += p[s] = w[s] + v[s] * t;
      for (double& x : p) x /= z;
      d.push_back(exact(p));
    }
    const auto c = fisher_curve(grid, d);
    for (double f : c.values) CHECK(f >= 0.0);

    // theta' = k * theta scales F by 1/k^2 and maps the argmax
    for (double k : {0.5, 3.0}) {
      SweepGrid scaled = grid;
      for (double& t : scaled.thetas) t *= k;
      const auto cs = fisher_curve(scaled, d);
      for (std::size_t m = 0; m < c.values.size(); ++m)
        CHECK(cs.values[m] == doctest::Approx(c.values[m] / (k * k)).epsilon(1e-9));
      CHECK(cs.theta_star == doctest::Approx(k * c.theta_star));
    }

    // argmax is unchanged by positive rescaling of the values
    for (double k : {1e-3, 2.5, 1e4}) {
      auto values = c.values;
      for (double& f : values) f *= k;
      CHECK(select_theta_star(grid.thetas, values) == c.theta_star);
    }
  }
}

TEST_CASE("linear family: central differences are exact at interior points") {
  // p_1 = 0.2 + 0.5 theta on an uneven grid
  const SweepGrid grid{{0.1, 0.3, 0.4, 0.9, 1.0}};
  std::vector<ProbVector> d;
  for (double t : grid.thetas) d.push_back(exact({0.8 - 0.5 * t, 0.2 + 0.5 * t}));
  const auto c = fisher_curve(grid, d);
  for (std::size_t m = 1; m + 1 < grid.thetas.size(); ++m) {
    const double p = 0.2 + 0.5 * grid.thetas[m];
    CHECK(c.values[m] == doctest::Approx(0.25 * (1 / p + 1 / (1 - p))).epsilon(1e-12));
  }
}

TEST_CASE("quadrature oracle for the binned Gaussian") {
  std::vector<double> grid;
  for (int m = 0; m <= 10; ++m) grid.push_back(0.1 * m);
  for (double t : grid) {
    double total = 0.0;
    for (double p : testing::BinnedGaussian::masses(t)) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
  const auto f = testing::binned_gaussian_oracle(grid);
  // binning loses a little information relative to the continuous F = 1
  for (std::size_t m = 1; m + 1 < grid.size(); ++m) {
    CHECK(f[m] < 1.0);
    CHECK(f[m] > 0.95);
  }
}

TEST_CASE("binned Gaussian estimate tracks the quadrature oracle") {
  std::mt19937_64 rng(42);
  std::vector<double> grid;
  for (int m = 0; m <= 10; ++m) grid.push_back(0.1 * m);
  const auto z = testing::BinnedGaussian::standard_normals(rng, 10000);
  std::map<double, std::vector<SymbolSeries>> sweep;
  for (double t : grid) sweep[t].push_back(series(testing::BinnedGaussian::bins, testing::BinnedGaussian::shifted(z, t)));
  const auto c = fisher_curve(sweep, 0.5);
  const auto oracle = testing::binned_gaussian_oracle(grid);
  for (std::size_t m = 1; m + 1 < grid.size(); ++m) CHECK(std::abs(c.values[m] / oracle[m] - 1.0) < 0.15);
}
