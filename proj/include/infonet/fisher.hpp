#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infonet/trace.hpp"

namespace infonet {

struct SweepGrid {
  std::vector<double> thetas;  // strictly increasing, at least 3 points
  std::string label = "theta";

  void validate() const;
};

// Smoothed empirical state distribution at one parameter value.
struct ProbVector {
  std::vector<double> probs;
  std::size_t sample_count = 0;
  double smoothing_beta = 0.0;

  void validate() const;
};

inline constexpr double kDefaultBeta = 0.5;

// p(s) = (count(s) + beta) / (total + beta * A), pooled over the ensemble.
ProbVector estimate_distribution(std::span<const SymbolSeries> ensemble, double beta = kDefaultBeta);
ProbVector distribution_from_counts(std::span<const std::size_t> counts, double beta = kDefaultBeta);

struct FisherCurve {
  SweepGrid grid;
  std::vector<double> values;  // F(theta_m), 1/(parameter unit)^2
  double theta_star = 0.0;
  std::optional<int> hub;
  double beta = kDefaultBeta;
};

// F(theta) = sum_s (dp_s/dtheta)^2 / p_s(theta), derivatives by central
// differences inside the grid and one-sided differences at both ends.
FisherCurve fisher_curve(const SweepGrid& grid, std::span<const ProbVector> distributions);

FisherCurve fisher_curve(const std::map<double, std::vector<SymbolSeries>>& sweep, double beta = kDefaultBeta,
                         std::string label = "theta");

// Grid point of maximal F; ties go to the lowest theta.
double select_theta_star(const FisherCurve& curve);
double select_theta_star(std::span<const double> thetas, std::span<const double> values);

}  // namespace infonet
