#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "namedis/errors.hpp"

namespace namedis {

// Disjoint sets with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false when a and b were already joined.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

// A partition of one block's mentions, indexed by block position (which is
// mention_id order). Labels are dense from 0 and assigned in order of each
// cluster's first member, so equal partitions have equal label vectors.
class Clustering {
 public:
  Clustering() = default;

  static Clustering singletons(std::size_t n);
  static Clustering single_cluster(std::size_t n);
  // Relabels any labeling into canonical form.
  static Clustering from_labels(std::span<const std::uint32_t> labels);
  static Clustering from_union_find(UnionFind& uf);

  std::size_t size() const { return labels_.size(); }
  std::size_t cluster_count() const { return clusters_; }
  std::uint32_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }
  std::vector<std::vector<std::uint32_t>> clusters() const;
  std::vector<std::uint32_t> cluster_sizes() const;

  // Every cluster of *this lies inside one cluster of `coarser`.
  bool refines(const Clustering& coarser) const;

  bool operator==(const Clustering&) const = default;

 private:
  std::vector<std::uint32_t> labels_;
  std::size_t clusters_ = 0;
};

using IndexEdge = std::pair<std::uint32_t, std::uint32_t>;

// Union-find components over block positions. Throws ValidationError for
// an edge endpoint outside [0, n).
Clustering connected_components(std::size_t n, std::span<const IndexEdge> edges);

// Same over mention ids; every edge endpoint must be one of `mention_ids`.
Clustering connected_components(std::span<const std::string> mention_ids,
                                std::span<const std::pair<std::string, std::string>> edges);

struct MergeStep {
  std::uint32_t cluster_a = 0;  // surviving cluster, the smaller id
  std::uint32_t cluster_b = 0;  // absorbed cluster
  double similarity = 0;        // similarity of the pair when merged
  // Running minimum of `similarity`: the largest stop value for which a
  // direct greedy run would still perform this merge. Non-increasing.
  double level = 0;
};

// Merges in execution order. Cluster ids are the labels of the initial
// clustering the merge loop started from; a merged cluster keeps the
// smaller id.
struct MergeTrace {
  std::vector<MergeStep> steps;

  std::size_t size() const { return steps.size(); }
};

// Replays the first `count` merges of `trace` on top of `initial`.
Clustering replay(const Clustering& initial, const MergeTrace& trace, std::size_t count);

// Clustering a direct greedy run with stop value `limit` would produce:
// replays merges while their level exceeds `limit`.
Clustering cut_trace(const Clustering& initial, const MergeTrace& trace, double limit);

// Number of leading merges kept by cut_trace at `limit`.
std::size_t cut_position(const MergeTrace& trace, double limit);

// Cluster-pair similarity over a mutable set of clusters, identified by
// the labels of the initial clustering.
template <class S>
concept ClusterSimilarity = requires(S s, std::uint32_t a, std::span<const std::uint32_t> others,
                                     std::span<double> out) {
  s.row(a, others, out);  // out[k] = sim(a, others[k]) for current clusters
  s.merge(a, a);          // absorb the second cluster into the first
};

struct MergeOptions {
  // Merge while the best similarity is strictly greater than this.
  double stop = -std::numeric_limits<double>::infinity();
  // Lower bound of every similarity, absorbing under merges: a merged
  // cluster only exceeds the floor against a third cluster when one of
  // its parts did. Once the best pair sits at the floor, remaining merges
  // are applied in id order without recomputing similarities.
  std::optional<double> floor;
};

// Agglomerative loop merging one most-similar pair at a time. Ties go to
// the lexicographically smallest (cluster_a, cluster_b). Similarities are
// recomputed against the merged cluster after every merge.
template <ClusterSimilarity Sim>
std::pair<Clustering, MergeTrace> greedy_max_merge(const Clustering& initial, Sim& sim,
                                                   const MergeOptions& options = {}) {
  const std::size_t k = initial.cluster_count();
  MergeTrace trace;
  if (k <= 1) return {initial, trace};

  auto index = [k](std::size_t i, std::size_t j) {  // i < j
    return i * (2 * k - i - 1) / 2 + (j - i - 1);
  };
  std::vector<double> table(k * (k - 1) / 2);
  std::vector<std::uint32_t> others;
  std::vector<double> out;
  others.reserve(k);
  out.reserve(k);
  for (std::uint32_t i = 0; i + 1 < k; ++i) {
    others.clear();
    for (std::uint32_t j = i + 1; j < k; ++j) others.push_back(j);
    out.resize(others.size());
    sim.row(i, others, out);
    std::copy(out.begin(), out.end(), table.begin() + static_cast<std::ptrdiff_t>(index(i, i + 1)));
  }

  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<char> alive(k, 1);
  std::vector<std::uint32_t> nn(k, 0);
  std::vector<double> nn_sim(k, kNone);
  std::vector<std::uint32_t> live(k);
  std::iota(live.begin(), live.end(), 0u);

  auto refresh = [&](std::uint32_t p) {
    nn_sim[p] = kNone;
    for (std::uint32_t q : live) {
      if (q <= p) continue;
      const double s = table[index(p, q)];
      if (s > nn_sim[p] || nn_sim[p] == kNone) {
        nn_sim[p] = s;
        nn[p] = q;
      }
    }
  };
  for (std::uint32_t p = 0; p < k; ++p) refresh(p);

  UnionFind uf(k);
  double level = std::numeric_limits<double>::infinity();
  while (live.size() > 1) {
    std::uint32_t best = live.front();
    for (std::uint32_t p : live) {
      if (nn_sim[p] > nn_sim[best]) best = p;
    }
    const double s = nn_sim[best];
    if (!(s > options.stop)) break;
    if (options.floor && s <= *options.floor) {
      // Every remaining pair sits at the floor: fold in id order.
      const std::uint32_t root = live.front();
      for (std::size_t t = 1; t < live.size(); ++t) {
        sim.merge(root, live[t]);
        uf.unite(root, live[t]);
        level = std::min(level, s);
        trace.steps.push_back({root, live[t], s, level});
      }
      live.resize(1);
      break;
    }
    const std::uint32_t a = best;
    const std::uint32_t b = nn[best];
    sim.merge(a, b);
    uf.unite(a, b);
    level = std::min(level, s);
    trace.steps.push_back({a, b, s, level});
    alive[b] = 0;
    live.erase(std::lower_bound(live.begin(), live.end(), b));

    others.clear();
    for (std::uint32_t q : live) {
      if (q != a) others.push_back(q);
    }
    out.resize(others.size());
    sim.row(a, others, out);
    for (std::size_t t = 0; t < others.size(); ++t) {
      const std::uint32_t q = others[t];
      table[q < a ? index(q, a) : index(a, q)] = out[t];
    }
    for (std::uint32_t p : live) {
      if (p == a || nn[p] == a || nn[p] == b) {
        refresh(p);
      } else if (p < a) {
        const double v = table[index(p, a)];
        if (v > nn_sim[p] || (v == nn_sim[p] && a < nn[p])) {
          nn_sim[p] = v;
          nn[p] = a;
        }
      }
    }
  }

  // Map initial clusters to their merged roots.
  std::vector<std::uint32_t> labels(initial.size());
  for (std::size_t m = 0; m < initial.size(); ++m) labels[m] = uf.find(initial.label(m));
  return {Clustering::from_labels(labels), std::move(trace)};
}

}  // namespace namedis
