#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "infonet/trace.hpp"

namespace infonet {

// Plug-in estimation of the average conditional transfer entropy
//
//   T(Y -> X | B) = 1/(L-k) * sum_n log2 p(x_{n+1} | x_n^(k), y_n, b_n)
//                                        / p(x_{n+1} | x_n^(k), b_n)
//
// over the L-k indices n in [k-1, L-2] that have a full k-history. All
// results are in bits.

struct EstimatorConfig {
  int history_k = 2;

  void validate() const;
};

struct JointKey {
  Symbol next = 0;
  std::vector<Symbol> past;  // x_{n-k+1} .. x_n, oldest first
  Symbol source = 0;
  Symbol cond = 0;

  auto operator<=>(const JointKey&) const = default;
};

struct ContingencyTable {
  int history_k = 0;
  std::map<JointKey, std::size_t> counts;
  std::size_t total = 0;
};

using SymbolSpan = std::span<const Symbol>;

ContingencyTable joint_counts(SymbolSpan x, SymbolSpan y, SymbolSpan b, const EstimatorConfig& cfg);

// Sum over the table entries of (count/total) * log2 of the conditional ratio.
double transfer_entropy(const ContingencyTable& table);

// Same quantity as transfer_entropy(joint_counts(...)) computed over packed
// integer keys. Returns exactly 0 when both conditionals coincide on every
// observed tuple.
double conditional_transfer_entropy(SymbolSpan x, SymbolSpan y, SymbolSpan b,
                                    const EstimatorConfig& cfg);

inline double conditional_transfer_entropy(const SymbolSeries& x, const SymbolSeries& y,
                                           const SymbolSeries& b, const EstimatorConfig& cfg) {
  return conditional_transfer_entropy(x.symbols, y.symbols, b.symbols, cfg);
}

}  // namespace infonet
