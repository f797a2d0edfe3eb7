#include "namedis/evaluation.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "namedis/errors.hpp"

namespace namedis {
namespace {

std::uint64_t pairs_of(std::uint64_t n) { return n * (n - (n > 0)) / 2; }

double ratio_or_one(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<std::uint32_t> intern_gold(const Clustering& clustering,
                                       std::span<const std::optional<std::string>> gold) {
  if (gold.size() != clustering.size()) {
    throw ValidationError("gold labels cover " + std::to_string(gold.size()) + " mentions, clustering " +
                          std::to_string(clustering.size()));
  }
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::uint32_t> labels(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i]) throw ValidationError("mention at position " + std::to_string(i) + " has no gold author id");
    labels[i] = ids.try_emplace(*gold[i], static_cast<std::uint32_t>(ids.size())).first->second;
  }
  return labels;
}

}  // namespace

ContingencyCounts& ContingencyCounts::operator+=(const ContingencyCounts& o) {
  mentions += o.mentions;
  pairs_cluster += o.pairs_cluster;
  pairs_author += o.pairs_author;
  pairs_both += o.pairs_both;
  best_cluster += o.best_cluster;
  best_author += o.best_author;
  gold_authors += o.gold_authors;
  clusters += o.clusters;
  return *this;
}

ContingencyCounts& ContingencyCounts::operator-=(const ContingencyCounts& o) {
  mentions -= o.mentions;
  pairs_cluster -= o.pairs_cluster;
  pairs_author -= o.pairs_author;
  pairs_both -= o.pairs_both;
  best_cluster -= o.best_cluster;
  best_author -= o.best_author;
  gold_authors -= o.gold_authors;
  clusters -= o.clusters;
  return *this;
}

ContingencyCounts contingency(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> gold) {
  if (predicted.size() != gold.size()) throw InvariantError("contingency: label spans differ in length");
  ContingencyCounts c;
  c.mentions = predicted.size();
  if (predicted.empty()) return c;
  // Dense relabelling keeps the cell table small.
  std::unordered_map<std::uint32_t, std::uint32_t> pmap, gmap;
  std::vector<std::uint32_t> p(predicted.size()), g(gold.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    p[i] = pmap.try_emplace(predicted[i], static_cast<std::uint32_t>(pmap.size())).first->second;
    g[i] = gmap.try_emplace(gold[i], static_cast<std::uint32_t>(gmap.size())).first->second;
  }
  const std::size_t np = pmap.size();
  const std::size_t ng = gmap.size();
  std::vector<std::uint64_t> psize(np, 0), gsize(ng, 0);
  std::unordered_map<std::uint64_t, std::uint64_t> cells;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++psize[p[i]];
    ++gsize[g[i]];
    ++cells[(static_cast<std::uint64_t>(p[i]) << 32) | g[i]];
  }
  std::vector<std::uint64_t> pmax(np, 0), gmax(ng, 0);
  for (const auto& [key, n] : cells) {
    const auto a = static_cast<std::uint32_t>(key >> 32);
    const auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
    c.pairs_both += pairs_of(n);
    pmax[a] = std::max(pmax[a], n);
    gmax[b] = std::max(gmax[b], n);
  }
  for (auto n : psize) c.pairs_cluster += pairs_of(n);
  for (auto n : gsize) c.pairs_author += pairs_of(n);
  for (auto n : pmax) c.best_cluster += n;
  for (auto n : gmax) c.best_author += n;
  c.gold_authors = ng;
  c.clusters = np;
  return c;
}

ContingencyCounts contingency_known(std::span<const std::uint32_t> predicted,
                                    std::span<const std::uint32_t> gold) {
  std::vector<std::uint32_t> p, g;
  p.reserve(predicted.size());
  g.reserve(gold.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (gold[i] == kNoGold) continue;
    p.push_back(predicted[i]);
    g.push_back(gold[i]);
  }
  return contingency(p, g);
}

double harmonic_mean(double p, double r) { return p <= 0 || r <= 0 ? 0.0 : 2 * p * r / (p + r); }

Metrics pairwise_metrics(const ContingencyCounts& c) {
  Metrics m;
  m.p = ratio_or_one(c.pairs_both, c.pairs_cluster);
  m.r = ratio_or_one(c.pairs_both, c.pairs_author);
  m.f1 = harmonic_mean(m.p, m.r);
  return m;
}

Metrics best_metrics(const ContingencyCounts& c) {
  Metrics m;
  m.p = ratio_or_one(c.best_cluster, c.mentions);
  m.r = ratio_or_one(c.best_author, c.mentions);
  m.f1 = harmonic_mean(m.p, m.r);
  return m;
}

Metrics pairwise_metrics(const Clustering& clustering, std::span<const std::optional<std::string>> gold) {
  return pairwise_metrics(contingency(clustering.labels(), intern_gold(clustering, gold)));
}

Metrics best_metrics(const Clustering& clustering, std::span<const std::optional<std::string>> gold) {
  return best_metrics(contingency(clustering.labels(), intern_gold(clustering, gold)));
}

std::string_view objective_name(Objective objective) {
  return objective == Objective::kF1Pair ? "f1_pair" : "f1_best";
}

Objective parse_objective(std::string_view name) {
  if (name == "f1_pair") return Objective::kF1Pair;
  if (name == "f1_best") return Objective::kF1Best;
  throw ValidationError("unknown objective '" + std::string(name) + "' (expected f1_pair or f1_best)");
}

double objective_value(const ContingencyCounts& c, Objective objective) {
  return objective == Objective::kF1Pair ? pairwise_metrics(c).f1 : best_metrics(c).f1;
}

EvalReport EvalReport::from_counts(std::string scope, std::size_t block_size, const ContingencyCounts& c) {
  EvalReport r;
  r.scope = std::move(scope);
  r.block_size = block_size;
  const Metrics pair = pairwise_metrics(c);
  const Metrics best = best_metrics(c);
  r.p_pair = pair.p;
  r.r_pair = pair.r;
  r.f1_pair = pair.f1;
  r.p_best = best.p;
  r.r_best = best.r;
  r.f1_best = best.f1;
  r.n_mentions = c.mentions;
  r.n_gold_authors = c.gold_authors;
  r.n_clusters = c.clusters;
  return r;
}

std::vector<std::uint32_t> block_gold_labels(const Block& block, const Corpus& corpus) {
  std::unordered_map<std::string_view, std::uint32_t> ids;
  std::vector<std::uint32_t> labels(block.size(), kNoGold);
  for (std::size_t i = 0; i < block.size(); ++i) {
    const auto& gold = corpus.mentions()[block.members[i]].gold_author_id;
    if (!gold) continue;
    labels[i] = ids.try_emplace(*gold, static_cast<std::uint32_t>(ids.size())).first->second;
  }
  return labels;
}

BlockEvaluation evaluate_block(const Block& block, const Clustering& clustering, const Corpus& corpus) {
  if (clustering.size() != block.size()) {
    throw InvariantError("clustering of block '" + block.key + "' has " + std::to_string(clustering.size()) +
                         " positions, block has " + std::to_string(block.size()));
  }
  return {block.key, block.size(), contingency_known(clustering.labels(), block_gold_labels(block, corpus))};
}

EvalReport aggregate(std::span<const BlockEvaluation> blocks, AggregateMode mode) {
  ContingencyCounts total;
  for (const auto& b : blocks) total += b.counts;
  std::size_t size = 0;
  for (const auto& b : blocks) size += b.block_size;
  EvalReport report = EvalReport::from_counts("overall", size, total);
  if (mode == AggregateMode::kPooled) return report;
  double sums[6] = {};
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (b.counts.mentions == 0) continue;
    const auto r = EvalReport::from_counts(b.key, b.block_size, b.counts);
    const double v[6] = {r.p_pair, r.r_pair, r.f1_pair, r.p_best, r.r_best, r.f1_best};
    for (int k = 0; k < 6; ++k) sums[k] += v[k];
    ++n;
  }
  if (n == 0) return report;
  const double d = static_cast<double>(n);
  report.p_pair = sums[0] / d;
  report.r_pair = sums[1] / d;
  report.f1_pair = sums[2] / d;
  report.p_best = sums[3] / d;
  report.r_best = sums[4] / d;
  report.f1_best = sums[5] / d;
  return report;
}

std::vector<SizeCurveRow> quality_by_size(std::span<const EvalReport> per_block) {
  std::map<std::size_t, SizeCurveRow> rows;
  for (const auto& r : per_block) {
    auto& row = rows[r.block_size];
    row.block_size = r.block_size;
    row.mean_f1_pair += r.f1_pair;
    row.mean_f1_best += r.f1_best;
    ++row.n_blocks;
  }
  std::vector<SizeCurveRow> out;
  out.reserve(rows.size());
  for (auto& [size, row] : rows) {
    row.mean_f1_pair /= static_cast<double>(row.n_blocks);
    row.mean_f1_best /= static_cast<double>(row.n_blocks);
    out.push_back(row);
  }
  return out;
}

}  // namespace namedis
