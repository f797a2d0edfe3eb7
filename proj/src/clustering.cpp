#include "namedis/clustering.hpp"

#include <algorithm>
#include <unordered_map>

namespace namedis {

Clustering Clustering::singletons(std::size_t n) {
  Clustering c;
  c.labels_.resize(n);
  std::iota(c.labels_.begin(), c.labels_.end(), 0u);
  c.clusters_ = n;
  return c;
}

Clustering Clustering::single_cluster(std::size_t n) {
  Clustering c;
  c.labels_.assign(n, 0);
  c.clusters_ = n > 0 ? 1 : 0;
  return c;
}

Clustering Clustering::from_labels(std::span<const std::uint32_t> labels) {
  Clustering c;
  c.labels_.resize(labels.size());
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  remap.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels[i], static_cast<std::uint32_t>(remap.size()));
    c.labels_[i] = it->second;
  }
  c.clusters_ = remap.size();
  return c;
}

Clustering Clustering::from_union_find(UnionFind& uf) {
  std::vector<std::uint32_t> labels(uf.size());
  for (std::uint32_t i = 0; i < labels.size(); ++i) labels[i] = uf.find(i);
  return from_labels(labels);
}

std::vector<std::vector<std::uint32_t>> Clustering::clusters() const {
  std::vector<std::vector<std::uint32_t>> out(clusters_);
  for (std::uint32_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

std::vector<std::uint32_t> Clustering::cluster_sizes() const {
  std::vector<std::uint32_t> sizes(clusters_, 0);
  for (auto l : labels_) ++sizes[l];
  return sizes;
}

bool Clustering::refines(const Clustering& coarser) const {
  if (coarser.size() != size()) return false;
  std::vector<std::uint32_t> parent(clusters_, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto& p = parent[labels_[i]];
    if (p == std::numeric_limits<std::uint32_t>::max()) {
      p = coarser.label(i);
    } else if (p != coarser.label(i)) {
      return false;
    }
  }
  return true;
}

Clustering connected_components(std::size_t n, std::span<const IndexEdge> edges) {
  UnionFind uf(n);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) {
      throw ValidationError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") references a position outside the block of size " + std::to_string(n));
    }
    uf.unite(a, b);
  }
  return Clustering::from_union_find(uf);
}

Clustering connected_components(std::span<const std::string> mention_ids,
                                std::span<const std::pair<std::string, std::string>> edges) {
  std::unordered_map<std::string_view, std::uint32_t> position;
  for (std::uint32_t i = 0; i < mention_ids.size(); ++i) position.emplace(mention_ids[i], i);
  std::vector<IndexEdge> indexed;
  indexed.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    auto ia = position.find(a);
    auto ib = position.find(b);
    if (ia == position.end() || ib == position.end()) {
      throw ValidationError("edge (" + a + ", " + b + ") references a mention outside the block");
    }
    indexed.emplace_back(ia->second, ib->second);
  }
  return connected_components(mention_ids.size(), indexed);
}

Clustering replay(const Clustering& initial, const MergeTrace& trace, std::size_t count) {
  UnionFind uf(initial.cluster_count());
  count = std::min(count, trace.steps.size());
  for (std::size_t s = 0; s < count; ++s) uf.unite(trace.steps[s].cluster_a, trace.steps[s].cluster_b);
  std::vector<std::uint32_t> labels(initial.size());
  for (std::size_t m = 0; m < initial.size(); ++m) labels[m] = uf.find(initial.label(m));
  return Clustering::from_labels(labels);
}

std::size_t cut_position(const MergeTrace& trace, double limit) {
  // Levels are non-increasing, so the kept merges form a prefix.
  auto it = std::partition_point(trace.steps.begin(), trace.steps.end(),
                                 [limit](const MergeStep& s) { return s.level > limit; });
  return static_cast<std::size_t>(it - trace.steps.begin());
}

Clustering cut_trace(const Clustering& initial, const MergeTrace& trace, double limit) {
  return replay(initial, trace, cut_position(trace, limit));
}

}  // namespace namedis
