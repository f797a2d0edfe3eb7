#include <doctest.h>

#include <queue>
#include <random>

#include "namedis/clustering.hpp"

using namespace namedis;

namespace {

// Average linkage over a fixed mention matrix.
struct AverageLinkage {
  std::vector<std::vector<double>> sim;
  std::vector<std::vector<std::uint32_t>> members;

  AverageLinkage(std::vector<std::vector<double>> s, const Clustering& initial)
      : sim(std::move(s)), members(initial.clusters()) {}

  double value(std::uint32_t a, std::uint32_t b) const {
    double sum = 0;
    for (auto i : members[a]) {
      for (auto j : members[b]) sum += sim[i][j];
    }
    return sum / static_cast<double>(members[a].size() * members[b].size());
  }
  void row(std::uint32_t a, std::span<const std::uint32_t> others, std::span<double> out) const {
    for (std::size_t k = 0; k < others.size(); ++k) out[k] = value(a, others[k]);
  }
  void merge(std::uint32_t a, std::uint32_t b) {
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
  }
};

std::vector<std::vector<double>> random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::vector<double>> s(n, std::vector<double>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) s[i][j] = s[j][i] = static_cast<double>(rng() % 5) / 4.0;
  }
  return s;
}

// Direct loop: scan all live pairs, best similarity, then smallest (a, b).
Clustering naive_greedy(const Clustering& initial, AverageLinkage sim, double stop) {
  const std::size_t k = initial.cluster_count();
  std::vector<std::uint32_t> root(k);
  std::iota(root.begin(), root.end(), 0u);
  std::vector<bool> alive(k, true);
  while (true) {
    double best = -INFINITY;
    std::uint32_t ba = 0, bb = 0;
    bool found = false;
    for (std::uint32_t a = 0; a < k; ++a) {
      for (std::uint32_t b = a + 1; b < k; ++b) {
        if (!alive[a] || !alive[b]) continue;
        const double s = sim.value(a, b);
        if (!found || s > best) {
          best = s;
          ba = a;
          bb = b;
          found = true;
        }
      }
    }
    if (!found || !(best > stop)) break;
    sim.merge(ba, bb);
    alive[bb] = false;
    for (auto& r : root) {
      if (r == bb) r = ba;
    }
  }
  std::vector<std::uint32_t> labels(initial.size());
  for (std::size_t m = 0; m < labels.size(); ++m) labels[m] = root[initial.label(m)];
  return Clustering::from_labels(labels);
}

Clustering bfs_components(std::size_t n, const std::vector<IndexEdge>& edges) {
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::uint32_t> label(n, UINT32_MAX);
  std::uint32_t next = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (label[s] != UINT32_MAX) continue;
    std::queue<std::uint32_t> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : adj[u]) {
        if (label[v] == UINT32_MAX) {
          label[v] = next;
          q.push(v);
        }
      }
    }
    ++next;
  }
  return Clustering::from_labels(label);
}

}  // namespace

TEST_CASE("canonical labels") {
  const std::vector<std::uint32_t> raw = {7, 3, 7, 9, 3};
  const auto c = Clustering::from_labels(raw);
  CHECK(c.labels() == std::vector<std::uint32_t>{0, 1, 0, 2, 1});
  CHECK(c.cluster_count() == 3);
  CHECK(c.cluster_sizes() == std::vector<std::uint32_t>{2, 2, 1});
  CHECK(Clustering::singletons(5).refines(c));
  CHECK_FALSE(Clustering::single_cluster(5).refines(c));
  CHECK(c.refines(Clustering::single_cluster(5)));
  CHECK(Clustering::single_cluster(0).cluster_count() == 0);
}

TEST_CASE("connected components match a BFS oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<IndexEdge> edges;
    const std::size_t m = rng() % (2 * n);
    for (std::size_t e = 0; e < m; ++e) {
      edges.emplace_back(static_cast<std::uint32_t>(rng() % n), static_cast<std::uint32_t>(rng() % n));
    }
    CHECK(connected_components(n, edges) == bfs_components(n, edges));
  }
  const std::vector<IndexEdge> bad = {{0, 5}};
  CHECK_THROWS_AS(connected_components(3, bad), ValidationError);
}

TEST_CASE("components over mention ids") {
  const std::vector<std::string> ids = {"a", "b", "c", "d"};
  const std::vector<std::pair<std::string, std::string>> edges = {{"a", "c"}, {"d", "c"}};
  CHECK(connected_components(ids, edges).labels() == std::vector<std::uint32_t>{0, 1, 0, 0});
  const std::vector<std::pair<std::string, std::string>> bad = {{"a", "z"}};
  CHECK_THROWS_AS(connected_components(ids, bad), ValidationError);
}

TEST_CASE("greedy toy trace") {
  // 0-1 strongly similar, 2 weakly tied to both.
  const std::vector<std::vector<double>> s = {{0, 0.9, 0.3}, {0.9, 0, 0.1}, {0.3, 0.1, 0}};
  const auto initial = Clustering::singletons(3);
  AverageLinkage sim(s, initial);
  auto [result, trace] = greedy_max_merge(initial, sim);
  REQUIRE(trace.size() == 2);
  CHECK(trace.steps[0].cluster_a == 0);
  CHECK(trace.steps[0].cluster_b == 1);
  CHECK(trace.steps[0].similarity == 0.9);
  CHECK(trace.steps[1].similarity == doctest::Approx(0.2));
  CHECK(trace.steps[1].level == doctest::Approx(0.2));
  CHECK(result.cluster_count() == 1);
  CHECK(cut_trace(initial, trace, 0.5).labels() == std::vector<std::uint32_t>{0, 0, 1});
  CHECK(cut_position(trace, 0.9) == 0);
  CHECK(cut_position(trace, 0.2) == 1);
  CHECK(replay(initial, trace, 2) == result);
}

TEST_CASE("greedy matches the naive loop and trace cuts match direct runs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const auto s = random_matrix(n, rng);
    // Start from a random partition to exercise non-singleton initial clusters.
    std::vector<std::uint32_t> raw(n);
    for (auto& r : raw) r = static_cast<std::uint32_t>(rng() % n);
    const auto initial = Clustering::from_labels(raw);
    AverageLinkage full_sim(s, initial);
    auto [full, trace] = greedy_max_merge(initial, full_sim);
    for (std::size_t t = 1; t < trace.size(); ++t) CHECK(trace.steps[t].level <= trace.steps[t - 1].level);
    for (double stop : {-1.0, 0.0, 0.25, 0.4, 0.5, 0.75, 1.0}) {
      AverageLinkage sim(s, initial);
      auto [direct, direct_trace] = greedy_max_merge(initial, sim, MergeOptions{stop, std::nullopt});
      CHECK(direct == naive_greedy(initial, AverageLinkage(s, initial), stop));
      CHECK(direct == cut_trace(initial, trace, stop));
    }
  }
}

TEST_CASE("floor folds remaining clusters") {
  const std::vector<std::vector<double>> s = {{0, 0.5, 0, 0}, {0.5, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  const auto initial = Clustering::singletons(4);
  AverageLinkage sim(s, initial);
  auto [result, trace] = greedy_max_merge(initial, sim, MergeOptions{-INFINITY, 0.0});
  REQUIRE(trace.size() == 3);
  CHECK(trace.steps[1].level == 0.0);
  CHECK(trace.steps[1].cluster_a == 0);
  CHECK(trace.steps[1].cluster_b == 2);
  CHECK(result.cluster_count() == 1);
  CHECK(cut_trace(initial, trace, 0.0).cluster_count() == 3);
}
