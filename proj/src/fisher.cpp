#include "infonet/fisher.hpp"

#include <cmath>
#include <numeric>

#include "infonet/error.hpp"

namespace infonet {

void SweepGrid::validate() const {
  if (thetas.size() < 3)
    throw Error(ErrorCode::GridTooSmall,
                "need at least 3 grid points, got " + std::to_string(thetas.size()));
  for (std::size_t m = 0; m < thetas.size(); ++m) {
    if (!std::isfinite(thetas[m])) throw Error(ErrorCode::InvalidConfig, "non-finite grid value");
    if (m > 0 && !(thetas[m] > thetas[m - 1]))
      throw Error(ErrorCode::InvalidConfig, "grid values must be strictly increasing");
  }
}

void ProbVector::validate() const {
  if (probs.empty()) throw Error(ErrorCode::EmptyEnsemble, "empty distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0))
      throw Error(ErrorCode::InvalidConfig, "zero probability in distribution; use a smoothing beta > 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::InvalidConfig, "probabilities do not sum to 1");
}

ProbVector distribution_from_counts(std::span<const std::size_t> counts, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw Error(ErrorCode::InvalidConfig, "--beta: smoothing constant must be >= 0");
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) throw Error(ErrorCode::EmptyEnsemble, "no symbols observed");
  ProbVector pv{{}, total, beta};
  const double denom = static_cast<double>(total) + beta * static_cast<double>(counts.size());
  for (std::size_t c : counts) pv.probs.push_back((static_cast<double>(c) + beta) / denom);
  pv.validate();
  return pv;
}

ProbVector estimate_distribution(std::span<const SymbolSeries> ensemble, double beta) {
  if (ensemble.empty()) throw Error(ErrorCode::EmptyEnsemble, "no series at this grid point");
  const int alphabet = ensemble.front().alphabet_size;
  if (alphabet < 1) throw Error(ErrorCode::InvalidConfig, "alphabet size must be positive");
  std::vector<std::size_t> counts(static_cast<std::size_t>(alphabet), 0);
  for (const auto& series : ensemble) {
    if (series.alphabet_size != alphabet)
      throw Error(ErrorCode::InvalidConfig, "ensemble series use different alphabets");
    for (Symbol s : series.symbols) {
      if (s >= alphabet) throw Error(ErrorCode::InvalidConfig, "symbol outside the alphabet");
      ++counts[s];
    }
  }
  return distribution_from_counts(counts, beta);
}

double select_theta_star(std::span<const double> thetas, std::span<const double> values) {
  if (thetas.empty() || thetas.size() != values.size())
    throw Error(ErrorCode::InvalidConfig, "grid and Fisher values differ in length");
  std::size_t best = 0;
  for (std::size_t m = 1; m < values.size(); ++m)
    if (values[m] > values[best]) best = m;
  return thetas[best];
}

double select_theta_star(const FisherCurve& curve) { return select_theta_star(curve.grid.thetas, curve.values); }

FisherCurve fisher_curve(const SweepGrid& grid, std::span<const ProbVector> distributions) {
  grid.validate();
  const std::size_t points = grid.thetas.size();
  if (distributions.size() != points)
    throw Error(ErrorCode::InvalidConfig, "one distribution per grid point required");
  const std::size_t alphabet = distributions.front().probs.size();
  for (const auto& pv : distributions) {
    pv.validate();
    if (pv.probs.size() != alphabet)
      throw Error(ErrorCode::InvalidConfig, "distributions differ in alphabet size");
  }

  const auto& th = grid.thetas;
  FisherCurve curve{grid, std::vector<double>(points, 0.0), th.front(), std::nullopt,
                    distributions.front().smoothing_beta};
  for (std::size_t m = 0; m < points; ++m) {
    const std::size_t lo = m == 0 ? 0 : m - 1;
    const std::size_t hi = m + 1 == points ? m : m + 1;
    const double step = th[hi] - th[lo];
    double f = 0.0;
    for (std::size_t s = 0; s < alphabet; ++s) {
      const double dp = (distributions[hi].probs[s] - distributions[lo].probs[s]) / step;
      f += dp * dp / distributions[m].probs[s];
    }
    curve.values[m] = f;
  }
  curve.theta_star = select_theta_star(curve);
  return curve;
}

FisherCurve fisher_curve(const std::map<double, std::vector<SymbolSeries>>& sweep, double beta,
                         std::string label) {
  SweepGrid grid{{}, std::move(label)};
  std::vector<ProbVector> dists;
  for (const auto& [theta, ensemble] : sweep) grid.thetas.push_back(theta);
  grid.validate();
  for (const auto& [theta, ensemble] : sweep) dists.push_back(estimate_distribution(ensemble, beta));
  auto curve = fisher_curve(grid, dists);
  curve.beta = beta;
  return curve;
}

}  // namespace infonet
