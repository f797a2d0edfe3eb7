#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "namedis/blocking.hpp"
#include "namedis/clustering.hpp"
#include "namedis/corpus.hpp"

namespace namedis {

// Raw counts behind both metric families. Summing counts of several blocks
// gives the pooled counts of their union.
struct ContingencyCounts {
  std::uint64_t mentions = 0;
  std::uint64_t pairs_cluster = 0;  // co-clustered mention pairs
  std::uint64_t pairs_author = 0;   // co-authored mention pairs
  std::uint64_t pairs_both = 0;
  std::uint64_t best_cluster = 0;  // sum over clusters of the majority author's count
  std::uint64_t best_author = 0;   // sum over authors of their largest cluster's count
  std::uint64_t gold_authors = 0;
  std::uint64_t clusters = 0;

  ContingencyCounts& operator+=(const ContingencyCounts& o);
  ContingencyCounts& operator-=(const ContingencyCounts& o);
  friend ContingencyCounts operator+(ContingencyCounts a, const ContingencyCounts& b) { return a += b; }
  friend bool operator==(const ContingencyCounts&, const ContingencyCounts&) = default;
};

// Counts for one partition. `gold[i]` is the author label of position i.
// Positions without a gold label must be removed by the caller.
ContingencyCounts contingency(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> gold);
// As above, skipping positions whose gold label is kNoGold.
inline constexpr std::uint32_t kNoGold = 0xffffffffu;
ContingencyCounts contingency_known(std::span<const std::uint32_t> predicted,
                                    std::span<const std::uint32_t> gold);

struct Metrics {
  double p = 0;
  double r = 0;
  double f1 = 0;
};

double harmonic_mean(double p, double r);
Metrics pairwise_metrics(const ContingencyCounts& c);
Metrics best_metrics(const ContingencyCounts& c);

// Throw ValidationError when a mention has no gold id.
Metrics pairwise_metrics(const Clustering& clustering, std::span<const std::optional<std::string>> gold);
Metrics best_metrics(const Clustering& clustering, std::span<const std::optional<std::string>> gold);

enum class Objective { kF1Pair, kF1Best };
std::string_view objective_name(Objective objective);
Objective parse_objective(std::string_view name);
double objective_value(const ContingencyCounts& c, Objective objective);

struct EvalReport {
  std::string scope;  // block key or "overall"
  std::size_t block_size = 0;
  double p_pair = 0, r_pair = 0, f1_pair = 0;
  double p_best = 0, r_best = 0, f1_best = 0;
  std::uint64_t n_mentions = 0;
  std::uint64_t n_gold_authors = 0;
  std::uint64_t n_clusters = 0;

  static EvalReport from_counts(std::string scope, std::size_t block_size, const ContingencyCounts& c);
};

// Gold labels of a block's positions, interned per block; kNoGold where a
// mention has no gold id.
std::vector<std::uint32_t> block_gold_labels(const Block& block, const Corpus& corpus);

struct BlockEvaluation {
  std::string key;
  std::size_t block_size = 0;
  ContingencyCounts counts;
};

// Mentions without gold ids are excluded.
BlockEvaluation evaluate_block(const Block& block, const Clustering& clustering, const Corpus& corpus);

enum class AggregateMode { kPooled, kMacro };

// Pooled: metrics of the summed counts. Macro: unweighted means of the
// per-block metrics (blocks with no gold mentions skipped).
EvalReport aggregate(std::span<const BlockEvaluation> blocks, AggregateMode mode = AggregateMode::kPooled);

struct SizeCurveRow {
  std::size_t block_size = 0;
  double mean_f1_pair = 0;
  double mean_f1_best = 0;
  std::size_t n_blocks = 0;
};

// Rows ascending by exact block size.
std::vector<SizeCurveRow> quality_by_size(std::span<const EvalReport> per_block);

}  // namespace namedis
