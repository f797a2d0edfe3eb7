#include "namedis/algorithms.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "namedis/errors.hpp"

namespace namedis {
namespace {

void require_finite(double v, const char* name) {
  if (std::isnan(v)) throw ValidationError(std::string(name) + " must be a number");
}

std::size_t tri_index(std::size_t n, std::size_t i, std::size_t j) {  // i < j
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

// Title and journal cosines between Cota clusters, expressed as the excess
// over the respective threshold so that "exceeds either threshold" is
// "excess > 0".
class CotaSimilarity {
 public:
  CotaSimilarity(std::vector<CotaModel::Document> titles, std::vector<CotaModel::Document> journals,
                 const std::vector<double>& title_idf, const std::vector<double>& journal_idf,
                 std::size_t vocabulary, const CotaParams& params)
      : titles_(std::move(titles)),
        journals_(std::move(journals)),
        title_idf_(title_idf),
        journal_idf_(journal_idf),
        params_(params),
        dense_title_(vocabulary, 0.0),
        dense_journal_(vocabulary, 0.0) {
    title_norm_.resize(titles_.size());
    journal_norm_.resize(journals_.size());
    for (std::size_t c = 0; c < titles_.size(); ++c) refresh_norms(static_cast<std::uint32_t>(c));
  }

  void row(std::uint32_t a, std::span<const std::uint32_t> others, std::span<double> out) {
    scatter(titles_[a], title_idf_, dense_title_);
    scatter(journals_[a], journal_idf_, dense_journal_);
    for (std::size_t k = 0; k < others.size(); ++k) {
      const std::uint32_t c = others[k];
      const double t = cosine(titles_[c], title_idf_, dense_title_, title_norm_[a], title_norm_[c]);
      const double j = cosine(journals_[c], journal_idf_, dense_journal_, journal_norm_[a], journal_norm_[c]);
      out[k] = std::max(t - params_.title_threshold, j - params_.journal_threshold);
    }
    clear(titles_[a], dense_title_);
    clear(journals_[a], dense_journal_);
  }

  void merge(std::uint32_t a, std::uint32_t b) {
    absorb(titles_[a], titles_[b]);
    absorb(journals_[a], journals_[b]);
    refresh_norms(a);
  }

  static double cosine(const CotaModel::Document& doc, const std::vector<double>& idf,
                       const std::vector<double>& dense, double norm_a, double norm_b) {
    if (norm_a <= 0 || norm_b <= 0) return 0.0;
    double dot = 0;
    for (const auto& [t, count] : doc.terms) dot += count * idf[t] * dense[t];
    return std::clamp(dot / (norm_a * norm_b), 0.0, 1.0);
  }

  static double norm(const CotaModel::Document& doc, const std::vector<double>& idf) {
    double sum = 0;
    for (const auto& [t, count] : doc.terms) {
      const double w = count * idf[t];
      sum += w * w;
    }
    return std::sqrt(sum);
  }

  static void scatter(const CotaModel::Document& doc, const std::vector<double>& idf,
                      std::vector<double>& dense) {
    for (const auto& [t, count] : doc.terms) dense[t] = count * idf[t];
  }

 private:
  static void clear(const CotaModel::Document& doc, std::vector<double>& dense) {
    for (const auto& [t, count] : doc.terms) dense[t] = 0.0;
  }

  static void absorb(CotaModel::Document& into, CotaModel::Document& from) {
    std::vector<std::pair<std::uint32_t, double>> merged;
    merged.reserve(into.terms.size() + from.terms.size());
    auto i = into.terms.begin();
    auto j = from.terms.begin();
    while (i != into.terms.end() || j != from.terms.end()) {
      if (j == from.terms.end() || (i != into.terms.end() && i->first < j->first)) {
        merged.push_back(*i++);
      } else if (i == into.terms.end() || j->first < i->first) {
        merged.push_back(*j++);
      } else {
        merged.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      }
    }
    into.terms = std::move(merged);
    from.terms.clear();
    from.terms.shrink_to_fit();
  }

  void refresh_norms(std::uint32_t c) {
    title_norm_[c] = norm(titles_[c], title_idf_);
    journal_norm_[c] = norm(journals_[c], journal_idf_);
  }

  std::vector<CotaModel::Document> titles_;
  std::vector<CotaModel::Document> journals_;
  const std::vector<double>& title_idf_;
  const std::vector<double>& journal_idf_;
  CotaParams params_;
  std::vector<double> title_norm_;
  std::vector<double> journal_norm_;
  std::vector<double> dense_title_;
  std::vector<double> dense_journal_;
};

// Specificity similarity between clusters of single mentions.
class SpecificitySimilarity {
 public:
  SpecificitySimilarity(const BlockFeatures& block, const FieldWeighting& weighting)
      : weighting_(weighting), mask_(block.strings.size(), 0) {
    bundles_.reserve(block.size());
    for (const auto& m : block.mentions) bundles_.push_back(FieldBundle::of(m, weighting));
  }

  void row(std::uint32_t a, std::span<const std::uint32_t> others, std::span<double> out) {
    const FieldBundle& A = bundles_[a];
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      for (auto t : A.tokens[f]) mask_[t] |= static_cast<std::uint8_t>(1u << f);
    }
    for (std::size_t k = 0; k < others.size(); ++k) {
      const FieldBundle& C = bundles_[others[k]];
      double sum = 0;
      int present = 0;
      for (std::size_t f = 0; f < kFieldCount; ++f) {
        const auto& tc = C.tokens[f];
        if (A.tokens[f].empty() && tc.empty()) continue;
        ++present;
        const double denom = std::min(A.total[f], C.total[f]);
        if (denom <= 0) continue;
        const auto& w = weighting_.weights(static_cast<Field>(f));
        const std::uint8_t bit = static_cast<std::uint8_t>(1u << f);
        double shared = 0;
        for (auto t : tc) {
          if (mask_[t] & bit) shared += w[t];
        }
        sum += std::min(1.0, shared / denom);
      }
      out[k] = present == 0 ? 0.0 : sum / present;
    }
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      for (auto t : A.tokens[f]) mask_[t] = 0;
    }
  }

  void merge(std::uint32_t a, std::uint32_t b) {
    bundles_[a].absorb(bundles_[b], weighting_);
    bundles_[b] = FieldBundle{};
  }

 private:
  const FieldWeighting& weighting_;
  std::vector<FieldBundle> bundles_;
  std::vector<std::uint8_t> mask_;
};

CotaModel::Document make_document(std::span<const std::uint32_t> sorted_terms) {
  CotaModel::Document doc;
  for (auto t : sorted_terms) {
    if (!doc.terms.empty() && doc.terms.back().first == t) {
      doc.terms.back().second += 1.0;
    } else {
      doc.terms.emplace_back(t, 1.0);
    }
  }
  return doc;
}

std::vector<double> document_idf(const std::vector<CotaModel::Document>& docs, std::size_t vocabulary) {
  std::vector<double> df(vocabulary, 0.0);
  for (const auto& d : docs) {
    for (const auto& [t, _] : d.terms) df[t] += 1.0;
  }
  std::vector<double> idf(vocabulary, 0.0);
  const double n = static_cast<double>(docs.size());
  for (std::size_t t = 0; t < vocabulary; ++t) {
    if (df[t] > 0) idf[t] = std::log(n / df[t]);
  }
  return idf;
}

}  // namespace

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBaseline: return "baseline";
    case Algorithm::kCota: return "cota";
    case Algorithm::kSchulz: return "schulz";
    case Algorithm::kCaron: return "caron";
    case Algorithm::kBackes: return "backes";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  throw ValidationError("unknown algorithm '" + std::string(name) +
                        "' (expected baseline, cota, schulz, caron or backes)");
}

void CotaParams::validate() const {
  require_finite(title_threshold, "cota.title_threshold");
  require_finite(journal_threshold, "cota.journal_threshold");
  if (title_threshold < 0 || journal_threshold < 0) {
    throw ValidationError("cota thresholds must be non-negative");
  }
  if (title_threshold > 1 || journal_threshold > 1) {
    spdlog::debug("cota threshold above 1 disables that similarity test");
  }
}

void SchulzParams::validate() const {
  for (double a : {alpha_a, alpha_s, alpha_r, alpha_c}) {
    require_finite(a, "schulz.alpha");
    if (a < 0) throw ValidationError("schulz alphas must be non-negative");
  }
  if (alpha_a + alpha_s + alpha_r + alpha_c <= 0) {
    throw ValidationError("at least one schulz alpha must be positive");
  }
  for (double b : {beta1, beta2, beta3, beta4}) require_finite(b, "schulz.beta");
}

std::size_t CaronParams::class_of(std::size_t block_size) const {
  std::size_t c = 0;
  while (c < class_bounds.size() && static_cast<double>(block_size) > class_bounds[c]) ++c;
  return c;
}

void CaronParams::validate() const {
  if (class_thresholds.size() != class_bounds.size() + 1) {
    throw ValidationError("caron.class_thresholds needs exactly one entry more than caron.class_bounds");
  }
  for (std::size_t i = 1; i < class_bounds.size(); ++i) {
    if (!(class_bounds[i] > class_bounds[i - 1])) {
      throw ValidationError("caron.class_bounds must be strictly ascending");
    }
  }
  for (double t : class_thresholds) require_finite(t, "caron.class_thresholds");
  for (std::size_t i = 1; i < class_thresholds.size(); ++i) {
    if (class_thresholds[i] < class_thresholds[i - 1]) {
      spdlog::warn("caron.class_thresholds decrease with block size ({} after {})",
                   class_thresholds[i], class_thresholds[i - 1]);
      break;
    }
  }
}

void BackesParams::validate() const {
  require_finite(lambda, "backes.lambda");
  if (fixed_limit) require_finite(*fixed_limit, "backes.limit");
  if (lambda < 0) throw ValidationError("backes.lambda must be non-negative");
}

AlgorithmParams AlgorithmParams::from_config(const FlatConfig& config) {
  AlgorithmParams p;
  p.cota.title_threshold = config.number_or("cota.title_threshold", p.cota.title_threshold);
  p.cota.journal_threshold = config.number_or("cota.journal_threshold", p.cota.journal_threshold);
  auto& s = p.schulz;
  s.alpha_a = config.number_or("schulz.alpha_a", s.alpha_a);
  s.alpha_s = config.number_or("schulz.alpha_s", s.alpha_s);
  s.alpha_r = config.number_or("schulz.alpha_r", s.alpha_r);
  s.alpha_c = config.number_or("schulz.alpha_c", s.alpha_c);
  s.beta1 = config.number_or("schulz.beta1", s.beta1);
  s.beta2 = config.number_or("schulz.beta2", s.beta2);
  s.beta3 = config.number_or("schulz.beta3", s.beta3);
  s.beta4 = config.number_or("schulz.beta4", s.beta4);
  if (config.has("caron.threshold")) {
    p.caron.class_bounds.clear();
    p.caron.class_thresholds = {config.number("caron.threshold")};
  }
  if (config.has("caron.class_bounds")) p.caron.class_bounds = config.numbers("caron.class_bounds");
  if (config.has("caron.class_thresholds")) {
    p.caron.class_thresholds = config.numbers("caron.class_thresholds");
  }
  p.caron.general_name_min_surnames = static_cast<std::size_t>(config.integer_or(
      "caron.general_name_min_surnames", static_cast<long long>(p.caron.general_name_min_surnames)));
  p.caron.table = RuleScoreTable::from_config(config);
  p.backes.lambda = config.number_or("backes.lambda", p.backes.lambda);
  if (config.has("backes.limit")) p.backes.fixed_limit = config.number("backes.limit");
  p.validate();
  return p;
}

AlgorithmParams AlgorithmParams::for_block(const FlatConfig& config, const std::string& block_key) {
  const FlatConfig overrides = config.subtree("block." + block_file_stem(block_key));
  if (overrides.empty()) return from_config(config);
  FlatConfig merged = config;
  if (overrides.has("caron.threshold")) {
    merged.erase("caron.class_bounds");
    merged.erase("caron.class_thresholds");
  }
  for (const auto& [key, value] : overrides.entries()) merged.set(key, value);
  return from_config(merged);
}

FlatConfig AlgorithmParams::to_config(Algorithm algorithm) const {
  FlatConfig c;
  c.set("algorithm", std::string(algorithm_name(algorithm)));
  switch (algorithm) {
    case Algorithm::kBaseline:
      break;
    case Algorithm::kCota:
      c.set("cota.title_threshold", cota.title_threshold);
      c.set("cota.journal_threshold", cota.journal_threshold);
      break;
    case Algorithm::kSchulz:
      c.set("schulz.alpha_a", schulz.alpha_a);
      c.set("schulz.alpha_s", schulz.alpha_s);
      c.set("schulz.alpha_r", schulz.alpha_r);
      c.set("schulz.alpha_c", schulz.alpha_c);
      c.set("schulz.beta1", schulz.beta1);
      c.set("schulz.beta2", schulz.beta2);
      c.set("schulz.beta3", schulz.beta3);
      c.set("schulz.beta4", schulz.beta4);
      break;
    case Algorithm::kCaron:
      if (caron.class_bounds.empty() && caron.class_thresholds.size() == 1) {
        c.set("caron.threshold", caron.class_thresholds[0]);
      } else {
        c.set("caron.class_bounds", caron.class_bounds);
        c.set("caron.class_thresholds", caron.class_thresholds);
      }
      c.set("caron.general_name_min_surnames", static_cast<double>(caron.general_name_min_surnames));
      caron.table.to_config(c);
      break;
    case Algorithm::kBackes:
      c.set("backes.lambda", backes.lambda);
      if (backes.fixed_limit) c.set("backes.limit", *backes.fixed_limit);
      break;
  }
  return c;
}

void AlgorithmParams::validate() const {
  cota.validate();
  schulz.validate();
  caron.validate();
  backes.validate();
}

// ---------------------------------------------------------------------------

double mention_similarity_schulz(const MentionFeatures& a, const MentionFeatures& b,
                                 const SchulzParams& params) {
  double s = 0;
  if (params.alpha_a != 0) s += params.alpha_a * overlap_min_normalized(a.coauthors, b.coauthors);
  if (params.alpha_s != 0) {
    const int cites = std::binary_search(b.references.begin(), b.references.end(), a.paper_id) +
                      std::binary_search(a.references.begin(), a.references.end(), b.paper_id);
    s += params.alpha_s * cites;
  }
  if (params.alpha_r != 0) {
    s += params.alpha_r * static_cast<double>(intersection_size(a.references, b.references));
  }
  if (params.alpha_c != 0) s += params.alpha_c * overlap_min_normalized(a.citers, b.citers);
  return s;
}

double mention_similarity_schulz(const Corpus& corpus, std::size_t m1, std::size_t m2,
                                 const SchulzParams& params) {
  const std::uint32_t members[2] = {static_cast<std::uint32_t>(m1), static_cast<std::uint32_t>(m2)};
  BlockFeatures f = build_block_features(corpus, members, GeneralNameList{});
  return mention_similarity_schulz(f.mentions[0], f.mentions[1], params);
}

double cluster_similarity_schulz(std::span<const std::uint32_t> gamma,
                                 std::span<const std::uint32_t> kappa,
                                 const std::function<double(std::uint32_t, std::uint32_t)>& pair_sim,
                                 double beta2) {
  if (gamma.empty() || kappa.empty()) return 0.0;
  double sum = 0;
  for (auto i : gamma) {
    for (auto j : kappa) {
      const double s = pair_sim(i, j);
      if (s > beta2) sum += s;
    }
  }
  return sum / (static_cast<double>(gamma.size()) * static_cast<double>(kappa.size()));
}

// ---------------------------------------------------------------------------

CotaModel::CotaModel(const BlockFeatures& block) {
  const std::size_t n = block.size();
  vocabulary_ = block.strings.size();
  // Step 1: mentions sharing a co-author name are linked.
  UnionFind uf(n);
  std::unordered_map<std::uint32_t, std::uint32_t> first_with;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (auto key : block.mentions[i].coauthors) {
      auto [it, inserted] = first_with.try_emplace(key, i);
      if (!inserted) uf.unite(it->second, i);
    }
  }
  step1_ = Clustering::from_union_find(uf);

  const std::size_t k = step1_.cluster_count();
  std::vector<std::vector<std::uint32_t>> title_terms(k);
  std::vector<std::vector<std::uint32_t>> journal_terms(k);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto c = step1_.label(i);
    const auto& m = block.mentions[i];
    title_terms[c].insert(title_terms[c].end(), m.title_terms.begin(), m.title_terms.end());
    journal_terms[c].insert(journal_terms[c].end(), m.journal_terms.begin(), m.journal_terms.end());
  }
  titles_.reserve(k);
  journals_.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::sort(title_terms[c].begin(), title_terms[c].end());
    std::sort(journal_terms[c].begin(), journal_terms[c].end());
    titles_.push_back(make_document(title_terms[c]));
    journals_.push_back(make_document(journal_terms[c]));
  }
  // The IDF base is fixed over the step-1 clusters.
  title_idf_ = document_idf(titles_, vocabulary_);
  journal_idf_ = document_idf(journals_, vocabulary_);
}

double CotaModel::title_cosine(std::uint32_t a, std::uint32_t b) const {
  std::vector<double> dense(vocabulary_, 0.0);
  CotaSimilarity::scatter(titles_[a], title_idf_, dense);
  return CotaSimilarity::cosine(titles_[b], title_idf_, dense, CotaSimilarity::norm(titles_[a], title_idf_),
                                CotaSimilarity::norm(titles_[b], title_idf_));
}

double CotaModel::journal_cosine(std::uint32_t a, std::uint32_t b) const {
  std::vector<double> dense(vocabulary_, 0.0);
  CotaSimilarity::scatter(journals_[a], journal_idf_, dense);
  return CotaSimilarity::cosine(journals_[b], journal_idf_, dense,
                                CotaSimilarity::norm(journals_[a], journal_idf_),
                                CotaSimilarity::norm(journals_[b], journal_idf_));
}

Clustering CotaModel::cluster(const CotaParams& params) const {
  if (step1_.cluster_count() <= 1) return step1_;
  CotaSimilarity sim(titles_, journals_, title_idf_, journal_idf_, vocabulary_, params);
  Clustering initial = Clustering::singletons(step1_.cluster_count());
  auto [merged, trace] = greedy_max_merge(initial, sim, MergeOptions{0.0, std::nullopt});
  std::vector<std::uint32_t> labels(step1_.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = merged.label(step1_.label(i));
  return Clustering::from_labels(labels);
}

// ---------------------------------------------------------------------------

SchulzModel::SchulzModel(const BlockFeatures& block, const SchulzParams& weights) : n_(block.size()) {
  weights.validate();
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency(n_);
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint32_t j = i + 1; j < n_; ++j) {
      const double s = mention_similarity_schulz(block.mentions[i], block.mentions[j], weights);
      if (s > 0) {
        adjacency[i].emplace_back(j, s);
        adjacency[j].emplace_back(i, s);
      }
    }
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + static_cast<std::uint32_t>(adjacency[i].size());
  pairs_.reserve(offsets_[n_]);
  for (std::uint32_t i = 0; i < n_; ++i) {
    std::sort(adjacency[i].begin(), adjacency[i].end());
    for (const auto& [j, s] : adjacency[i]) pairs_.push_back({i, j, s});
  }
}

double SchulzModel::similarity(std::uint32_t i, std::uint32_t j) const {
  auto begin = pairs_.begin() + offsets_[i];
  auto end = pairs_.begin() + offsets_[i + 1];
  auto it = std::lower_bound(begin, end, j, [](const Pair& p, std::uint32_t v) { return p.j < v; });
  return it != end && it->j == j ? it->s : 0.0;
}

SchulzModel::Steps SchulzModel::run_steps(const SchulzParams& t) const {
  Steps steps;
  // Step 1: link pairs with s > beta1. Unstored pairs have s = 0.
  if (t.beta1 < 0) {
    steps.after_step1 = Clustering::single_cluster(n_);
  } else {
    UnionFind uf(n_);
    for (const auto& p : pairs_) {
      if (p.i < p.j && p.s > t.beta1) uf.unite(p.i, p.j);
    }
    steps.after_step1 = Clustering::from_union_find(uf);
  }
  const Clustering& c1 = steps.after_step1;

  // Step 2: link clusters whose gated average similarity exceeds beta3.
  if (t.beta3 < 0) {
    steps.after_step2 = Clustering::single_cluster(n_);
  } else {
    const auto sizes = c1.cluster_sizes();
    std::unordered_map<std::uint64_t, double> sums;
    for (const auto& p : pairs_) {
      if (p.i >= p.j || !(p.s > t.beta2)) continue;
      std::uint64_t a = c1.label(p.i);
      std::uint64_t b = c1.label(p.j);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      sums[(a << 32) | b] += p.s;
    }
    UnionFind uf(c1.cluster_count());
    for (const auto& [key, sum] : sums) {
      const auto a = static_cast<std::uint32_t>(key >> 32);
      const auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
      const double s = sum / (static_cast<double>(sizes[a]) * static_cast<double>(sizes[b]));
      if (s > t.beta3) uf.unite(a, b);
    }
    std::vector<std::uint32_t> labels(n_);
    for (std::size_t i = 0; i < n_; ++i) labels[i] = uf.find(c1.label(i));
    steps.after_step2 = Clustering::from_labels(labels);
  }
  const Clustering& c2 = steps.after_step2;

  // Step 3: attach remaining singletons to the multi-mention cluster holding
  // their most similar mention, provided that similarity exceeds beta4.
  const auto sizes = c2.cluster_sizes();
  std::uint32_t smallest_multi = std::numeric_limits<std::uint32_t>::max();
  for (std::uint32_t c = 0; c < sizes.size(); ++c) {
    if (sizes[c] >= 2) {
      smallest_multi = c;
      break;
    }
  }
  std::vector<std::uint32_t> labels = c2.labels();
  if (smallest_multi != std::numeric_limits<std::uint32_t>::max()) {
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (sizes[c2.label(i)] != 1) continue;
      std::uint32_t target = std::numeric_limits<std::uint32_t>::max();
      double best = -std::numeric_limits<double>::infinity();
      for (std::uint32_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        const auto& p = pairs_[k];
        const std::uint32_t c = c2.label(p.j);
        if (sizes[c] < 2 || !(p.s > t.beta4)) continue;
        if (p.s > best || (p.s == best && c < target)) {
          best = p.s;
          target = c;
        }
      }
      if (target == std::numeric_limits<std::uint32_t>::max() && 0.0 > t.beta4) target = smallest_multi;
      if (target != std::numeric_limits<std::uint32_t>::max()) labels[i] = target;
    }
  }
  steps.after_step3 = Clustering::from_labels(labels);
  return steps;
}

// ---------------------------------------------------------------------------

CaronModel::CaronModel(const BlockFeatures& block, const RuleScoreTable& table) : n_(block.size()) {
  scores_.resize(n_ > 1 ? n_ * (n_ - 1) / 2 : 0);
  std::size_t k = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint32_t j = i + 1; j < n_; ++j) {
      const int s = rule_score(block.mentions[i], block.mentions[j], table);
      if (s > std::numeric_limits<std::int16_t>::max() || s < std::numeric_limits<std::int16_t>::min()) {
        throw ValidationError("rule score table produces scores outside the 16-bit range");
      }
      scores_[k++] = static_cast<std::int16_t>(s);
    }
  }
}

int CaronModel::score(std::uint32_t i, std::uint32_t j) const {
  if (i == j) throw InvariantError("CaronModel::score on a self pair");
  if (i > j) std::swap(i, j);
  return scores_[tri_index(n_, i, j)];
}

Clustering CaronModel::cluster(double threshold) const {
  UnionFind uf(n_);
  std::size_t k = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint32_t j = i + 1; j < n_; ++j, ++k) {
      if (scores_[k] >= threshold) uf.unite(i, j);
    }
  }
  return Clustering::from_union_find(uf);
}

// ---------------------------------------------------------------------------

BackesModel::BackesModel(const BlockFeatures& block) : n_(block.size()) {
  FieldWeighting weighting(block);
  SpecificitySimilarity sim(block, weighting);
  auto result = greedy_max_merge(Clustering::singletons(n_), sim,
                                 MergeOptions{-std::numeric_limits<double>::infinity(), 0.0});
  trace_ = std::move(result.second);
}

Clustering BackesModel::cluster(double limit) const {
  return cut_trace(Clustering::singletons(n_), trace_, limit);
}

// ---------------------------------------------------------------------------

Clustering run_baseline(const Block& block) { return Clustering::single_cluster(block.size()); }

Clustering run_cota(const Block& block, const Corpus& corpus, const CotaParams& params) {
  params.validate();
  return CotaModel(build_block_features(corpus, block.members, GeneralNameList{})).cluster(params);
}

Clustering run_schulz(const Block& block, const Corpus& corpus, const SchulzParams& params) {
  params.validate();
  return SchulzModel(build_block_features(corpus, block.members, GeneralNameList{}), params).cluster(params);
}

Clustering run_caron(const Block& block, const Corpus& corpus, const CaronParams& params,
                     const GeneralNameList& names) {
  params.validate();
  CaronModel model(build_block_features(corpus, block.members, names), params.table);
  return model.cluster(params.threshold_for(block.size()));
}

std::pair<Clustering, MergeTrace> run_backes(const Block& block, const Corpus& corpus,
                                             const BackesParams& params) {
  params.validate();
  BackesModel model(build_block_features(corpus, block.members, GeneralNameList{}));
  return {model.cluster(params.limit(block.size())), model.trace()};
}

BlockResult run_algorithm(Algorithm algorithm, const Block& block, const Corpus& corpus,
                          const AlgorithmParams& params, const GeneralNameList& names) {
  switch (algorithm) {
    case Algorithm::kBaseline: return {run_baseline(block), {}};
    case Algorithm::kCota: return {run_cota(block, corpus, params.cota), {}};
    case Algorithm::kSchulz: return {run_schulz(block, corpus, params.schulz), {}};
    case Algorithm::kCaron: return {run_caron(block, corpus, params.caron, names), {}};
    case Algorithm::kBackes: {
      auto [clustering, trace] = run_backes(block, corpus, params.backes);
      return {std::move(clustering), std::move(trace)};
    }
  }
  throw InvariantError("unhandled algorithm");
}

}  // namespace namedis
