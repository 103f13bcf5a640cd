#pragma once

// Test-only reference implementations. Not part of the installed library.

#include "infonet/estimators.hpp"

namespace infonet::oracle {

// Conditional transfer entropy as a four-entropy decomposition
//   H(X', P, B) - H(P, B) - H(X', P, Y, B) + H(P, Y, B)
// built from four independently counted marginal tables.
double brute_force_te_oracle(SymbolSpan x, SymbolSpan y, SymbolSpan b, const EstimatorConfig& cfg);

// Unconditioned variant: the same decomposition without the B variable.
double brute_force_te_oracle(SymbolSpan x, SymbolSpan y, const EstimatorConfig& cfg);

}  // namespace infonet::oracle
