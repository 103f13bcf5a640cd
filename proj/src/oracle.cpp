#include "infonet/oracle.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "infonet/error.hpp"

namespace infonet::oracle {

namespace {

using Tuple = std::vector<int>;

double entropy_bits(const std::map<Tuple, long>& table, long total) {
  double acc = 0.0;
  for (const auto& [key, c] : table) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
  return std::log2(static_cast<double>(total)) - acc / static_cast<double>(total);
}

double decomposition(SymbolSpan x, SymbolSpan y, std::optional<SymbolSpan> b, const EstimatorConfig& cfg) {
  if (cfg.history_k < 1) throw Error(ErrorCode::InvalidConfig, "history length must be >= 1");
  if (x.size() != y.size() || (b && b->size() != x.size()))
    throw Error(ErrorCode::LengthMismatch, "series lengths differ");
  const long k = cfg.history_k;
  const long len = static_cast<long>(x.size());
  if (len <= k) throw Error(ErrorCode::SeriesTooShort, "series too short");

  std::map<Tuple, long> next_past_cond, past_cond, next_past_src_cond, past_src_cond;
  long total = 0;
  for (long n = k - 1; n <= len - 2; ++n) {
    Tuple past;
    for (long t = n - k + 1; t <= n; ++t) past.push_back(x[static_cast<std::size_t>(t)]);
    const int cond = b ? (*b)[static_cast<std::size_t>(n)] : 0;
    const int src = y[static_cast<std::size_t>(n)];
    const int next = x[static_cast<std::size_t>(n + 1)];

    Tuple pc = past;
    pc.push_back(cond);
    Tuple psc = pc;
    psc.push_back(src);
    Tuple npc = pc;
    npc.insert(npc.begin(), next);
    Tuple npsc = psc;
    npsc.insert(npsc.begin(), next);

    ++past_cond[pc];
    ++past_src_cond[psc];
    ++next_past_cond[npc];
    ++next_past_src_cond[npsc];
    ++total;
  }
  return entropy_bits(next_past_cond, total) - entropy_bits(past_cond, total) -
         entropy_bits(next_past_src_cond, total) + entropy_bits(past_src_cond, total);
}

}  // namespace

double brute_force_te_oracle(SymbolSpan x, SymbolSpan y, SymbolSpan b, const EstimatorConfig& cfg) {
  return decomposition(x, y, b, cfg);
}

double brute_force_te_oracle(SymbolSpan x, SymbolSpan y, const EstimatorConfig& cfg) {
  return decomposition(x, y, std::nullopt, cfg);
}

}  // namespace infonet::oracle
