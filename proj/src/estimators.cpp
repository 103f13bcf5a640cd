#include "infonet/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "infonet/error.hpp"

namespace infonet {

void EstimatorConfig::validate() const {
  if (history_k < 1) throw Error(ErrorCode::InvalidConfig, "--k: history length must be >= 1");
}

namespace {

void check_inputs(SymbolSpan x, SymbolSpan y, SymbolSpan b, const EstimatorConfig& cfg) {
  cfg.validate();
  if (x.size() != y.size() || x.size() != b.size())
    throw Error(ErrorCode::LengthMismatch, "series lengths differ: " + std::to_string(x.size()) + ", " +
                                               std::to_string(y.size()) + ", " + std::to_string(b.size()));
  if (x.size() <= static_cast<std::size_t>(cfg.history_k))
    throw Error(ErrorCode::SeriesTooShort, "series length " + std::to_string(x.size()) +
                                               " must exceed k = " + std::to_string(cfg.history_k));
}

double log_ratio(double c_full, double c_pb, double c_pyb, double c_npb) {
  return std::log2((c_full * c_pb) / (c_pyb * c_npb));
}

// Unique keys with their multiplicities, sorted by key.
struct Tally {
  std::vector<std::uint64_t> keys;
  std::vector<std::uint32_t> counts;

  explicit Tally(std::vector<std::uint64_t> raw) {
    std::sort(raw.begin(), raw.end());
    for (std::size_t i = 0; i < raw.size();) {
      std::size_t j = i;
      while (j < raw.size() && raw[j] == raw[i]) ++j;
      keys.push_back(raw[i]);
      counts.push_back(static_cast<std::uint32_t>(j - i));
      i = j;
    }
  }

  std::uint32_t count(std::uint64_t key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    return counts[static_cast<std::size_t>(it - keys.begin())];
  }
};

// Key spaces up to this size are counted in flat arrays instead of sorting.
constexpr std::uint64_t kDenseKeyLimit = std::uint64_t{1} << 20;

double dense_te(SymbolSpan x, SymbolSpan y, SymbolSpan b, std::size_t k, std::uint64_t alphabet,
                std::uint64_t window) {
  const std::uint64_t ctx_space = window * alphabet;
  thread_local std::vector<std::uint32_t> c_full, c_pyb, c_npb, c_pb;
  auto ensure = [](std::vector<std::uint32_t>& v, std::uint64_t size) {
    if (v.size() < size) v.assign(size, 0);
  };
  ensure(c_pb, ctx_space);
  ensure(c_pyb, ctx_space * alphabet);
  ensure(c_npb, ctx_space * alphabet);
  ensure(c_full, ctx_space * alphabet * alphabet);

  std::vector<std::uint64_t> first_seen;  // distinct full keys in order of appearance
  std::uint64_t past = 0;
  for (std::size_t i = 0; i + 1 < k; ++i) past = past * alphabet + x[i];
  for (std::size_t n = k - 1; n + 1 < x.size(); ++n) {
    past = (past * alphabet + x[n]) % window;
    const std::uint64_t ctx = past * alphabet + b[n];
    const std::uint64_t ctx_src = ctx * alphabet + y[n];
    const std::uint64_t full = ctx_src * alphabet + x[n + 1];
    if (c_full[full]++ == 0) first_seen.push_back(full);
    ++c_pb[ctx];
    ++c_pyb[ctx_src];
    ++c_npb[ctx * alphabet + x[n + 1]];
  }

  double sum = 0.0;
  for (std::uint64_t key : first_seen) {
    const std::uint64_t next = key % alphabet;
    const std::uint64_t ctx_src = key / alphabet;
    const std::uint64_t ctx = ctx_src / alphabet;
    const double c = c_full[key];
    sum += c * log_ratio(c, c_pb[ctx], c_pyb[ctx_src], c_npb[ctx * alphabet + next]);
  }
  // leave the scratch arrays zeroed for the next call
  for (std::uint64_t key : first_seen) {
    const std::uint64_t ctx_src = key / alphabet;
    const std::uint64_t ctx = ctx_src / alphabet;
    c_full[key] = 0;
    c_pyb[ctx_src] = 0;
    c_pb[ctx] = 0;
    c_npb[ctx * alphabet + key % alphabet] = 0;
  }
  return sum / static_cast<double>(x.size() - k);
}

}  // namespace

ContingencyTable joint_counts(SymbolSpan x, SymbolSpan y, SymbolSpan b, const EstimatorConfig& cfg) {
  check_inputs(x, y, b, cfg);
  const std::size_t k = static_cast<std::size_t>(cfg.history_k);
  ContingencyTable table;
  table.history_k = cfg.history_k;
  for (std::size_t n = k - 1; n + 1 < x.size(); ++n) {
    JointKey key{x[n + 1], {x.begin() + static_cast<std::ptrdiff_t>(n + 1 - k),
                            x.begin() + static_cast<std::ptrdiff_t>(n + 1)},
                 y[n], b[n]};
    ++table.counts[std::move(key)];
    ++table.total;
  }
  return table;
}

double transfer_entropy(const ContingencyTable& table) {
  if (table.total == 0) throw Error(ErrorCode::SeriesTooShort, "empty contingency table");
  using Context = std::pair<std::vector<Symbol>, Symbol>;
  std::map<Context, std::size_t> past_cond;
  std::map<std::pair<Context, Symbol>, std::size_t> past_cond_source;
  std::map<std::pair<Context, Symbol>, std::size_t> past_cond_next;
  for (const auto& [key, c] : table.counts) {
    Context ctx{key.past, key.cond};
    past_cond[ctx] += c;
    past_cond_source[{ctx, key.source}] += c;
    past_cond_next[{ctx, key.next}] += c;
  }
  double sum = 0.0;
  for (const auto& [key, c] : table.counts) {
    Context ctx{key.past, key.cond};
    sum += static_cast<double>(c) *
           log_ratio(static_cast<double>(c), static_cast<double>(past_cond.at(ctx)),
                     static_cast<double>(past_cond_source.at({ctx, key.source})),
                     static_cast<double>(past_cond_next.at({ctx, key.next})));
  }
  return sum / static_cast<double>(table.total);
}

double conditional_transfer_entropy(SymbolSpan x, SymbolSpan y, SymbolSpan b, const EstimatorConfig& cfg) {
  check_inputs(x, y, b, cfg);
  const std::size_t k = static_cast<std::size_t>(cfg.history_k);

  std::uint64_t alphabet = 1;
  for (SymbolSpan s : {x, y, b})
    for (Symbol v : s) alphabet = std::max<std::uint64_t>(alphabet, std::uint64_t{v} + 1);

  // Packed keys need alphabet^(k+3) to fit in 64 bits; otherwise use the table.
  long double space = std::pow(static_cast<long double>(alphabet), static_cast<long double>(k + 3));
  if (space >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))
    return transfer_entropy(joint_counts(x, y, b, cfg));

  const std::size_t rows = x.size() - k;
  std::uint64_t window = 1;  // alphabet^k
  for (std::size_t i = 0; i < k; ++i) window *= alphabet;

  if (space <= static_cast<long double>(kDenseKeyLimit)) return dense_te(x, y, b, k, alphabet, window);

  std::vector<std::uint64_t> full, pb, pyb, npb;
  full.reserve(rows);
  pb.reserve(rows);
  pyb.reserve(rows);
  npb.reserve(rows);

  std::uint64_t past = 0;
  for (std::size_t i = 0; i + 1 < k; ++i) past = past * alphabet + x[i];

  for (std::size_t n = k - 1; n + 1 < x.size(); ++n) {
    past = (past * alphabet + x[n]) % window;
    const std::uint64_t ctx = past * alphabet + b[n];
    const std::uint64_t ctx_src = ctx * alphabet + y[n];
    pb.push_back(ctx);
    pyb.push_back(ctx_src);
    npb.push_back(ctx * alphabet + x[n + 1]);
    full.push_back(ctx_src * alphabet + x[n + 1]);
  }

  const Tally t_full(std::move(full)), t_pb(std::move(pb)), t_pyb(std::move(pyb)), t_npb(std::move(npb));
  double sum = 0.0;
  for (std::size_t u = 0; u < t_full.keys.size(); ++u) {
    const std::uint64_t key = t_full.keys[u];
    const std::uint64_t next = key % alphabet;
    const std::uint64_t ctx_src = key / alphabet;
    const std::uint64_t ctx = ctx_src / alphabet;
    const double c = t_full.counts[u];
    sum += c * log_ratio(c, t_pb.count(ctx), t_pyb.count(ctx_src), t_npb.count(ctx * alphabet + next));
  }
  return sum / static_cast<double>(rows);
}

}  // namespace infonet
