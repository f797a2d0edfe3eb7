#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "namedis/blocking.hpp"
#include "namedis/clustering.hpp"
#include "namedis/config.hpp"
#include "namedis/corpus.hpp"
#include "namedis/features.hpp"

namespace namedis {

enum class Algorithm { kBaseline, kCota, kSchulz, kCaron, kBackes };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kBaseline, Algorithm::kCota,
                                               Algorithm::kSchulz, Algorithm::kCaron,
                                               Algorithm::kBackes};

std::string_view algorithm_name(Algorithm algorithm);
// Throws ValidationError for an unknown name.
Algorithm parse_algorithm(std::string_view name);

// Two-step co-author / title-and-journal method. A cluster pair merges in
// step 2 when its title cosine exceeds title_threshold or its journal
// cosine exceeds journal_threshold. Thresholds at or above 1 disable the
// corresponding test.
struct CotaParams {
  double title_threshold = 0.6;
  double journal_threshold = 1.0;

  void validate() const;
};

// Citation-network similarity with three linking steps.
struct SchulzParams {
  double alpha_a = 1.0;  // co-authors
  double alpha_s = 1.0;  // self-citations
  double alpha_r = 0.2;  // shared references
  double alpha_c = 0.2;  // shared citing papers
  double beta1 = 1.0;    // step 1 pair links
  double beta2 = 0.5;    // pair gate inside the cluster similarity
  double beta3 = 0.2;    // step 2 cluster links
  double beta4 = 0.5;    // step 3 singleton attachment

  void validate() const;
};

// Rule scores thresholded per block-size class.
struct CaronParams {
  // Class c holds sizes in (bounds[c-1], bounds[c]]; the last class is open.
  std::vector<double> class_bounds = {500, 1000, 2000, 3000, 4500};
  std::vector<double> class_thresholds = {21, 22, 25, 27, 29, 29};
  RuleScoreTable table;
  std::size_t general_name_min_surnames = GeneralNameList::kDefaultMinSurnames;

  std::size_t class_of(std::size_t block_size) const;
  double threshold_for(std::size_t block_size) const {
    return class_thresholds[class_of(block_size)];
  }
  void validate() const;
};

// Specificity-based agglomeration stopped at quality limit lambda * |block|.
struct BackesParams {
  double lambda = 0.0005;
  std::optional<double> fixed_limit;  // per-block override of lambda * |block|

  double limit(std::size_t block_size) const {
    return fixed_limit ? *fixed_limit : lambda * static_cast<double>(block_size);
  }
  void validate() const;
};

// Parameters for every algorithm, as read from or written to a params file.
struct AlgorithmParams {
  CotaParams cota;
  SchulzParams schulz;
  CaronParams caron;
  BackesParams backes;

  // Reads `cota.*`, `schulz.*`, `caron.*`, `backes.*` and `score.*` keys.
  static AlgorithmParams from_config(const FlatConfig& config);
  // from_config with the `block.<file stem>.*` overrides of one block
  // applied on top; `block.<stem>.caron.threshold` pins a single Caron
  // threshold regardless of size class.
  static AlgorithmParams for_block(const FlatConfig& config, const std::string& block_key);
  // Keys relevant to one algorithm.
  FlatConfig to_config(Algorithm algorithm) const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Pair and cluster similarities

double mention_similarity_schulz(const MentionFeatures& a, const MentionFeatures& b,
                                 const SchulzParams& params);
double mention_similarity_schulz(const Corpus& corpus, std::size_t m1, std::size_t m2,
                                 const SchulzParams& params);

// Sum of gated pair similarities (s > beta2) over the cross pairs,
// divided by |gamma| * |kappa|.
double cluster_similarity_schulz(std::span<const std::uint32_t> gamma,
                                 std::span<const std::uint32_t> kappa,
                                 const std::function<double(std::uint32_t, std::uint32_t)>& pair_sim,
                                 double beta2);

// ---------------------------------------------------------------------------
// Per-block models. Each caches the parameter-independent work for one
// block so that different parameter values can be applied cheaply.

class CotaModel {
 public:
  explicit CotaModel(const BlockFeatures& block);

  // Components over shared co-author names.
  const Clustering& step1() const { return step1_; }
  Clustering cluster(const CotaParams& params) const;

  // Cluster-level cosines between step-1 clusters a and b.
  double title_cosine(std::uint32_t a, std::uint32_t b) const;
  double journal_cosine(std::uint32_t a, std::uint32_t b) const;

  struct Document {
    std::vector<std::pair<std::uint32_t, double>> terms;  // sorted by term, raw counts
  };

 private:
  Clustering step1_;
  std::vector<Document> titles_;
  std::vector<Document> journals_;
  std::vector<double> title_idf_;
  std::vector<double> journal_idf_;
  std::size_t vocabulary_ = 0;
};

class SchulzModel {
 public:
  SchulzModel(const BlockFeatures& block, const SchulzParams& weights);

  struct Steps {
    Clustering after_step1;
    Clustering after_step2;
    Clustering after_step3;
  };
  Steps run_steps(const SchulzParams& thresholds) const;
  Clustering cluster(const SchulzParams& thresholds) const { return run_steps(thresholds).after_step3; }

  // Pair similarity between block positions; 0 for pairs not stored.
  double similarity(std::uint32_t i, std::uint32_t j) const;
  std::size_t positive_pairs() const { return pairs_.size() / 2; }

 private:
  struct Pair {
    std::uint32_t i;
    std::uint32_t j;
    double s;
  };
  std::size_t n_ = 0;
  std::vector<Pair> pairs_;  // s > 0 only, both directions, sorted by (i, j)
  std::vector<std::uint32_t> offsets_;
};

class CaronModel {
 public:
  CaronModel(const BlockFeatures& block, const RuleScoreTable& table);

  int score(std::uint32_t i, std::uint32_t j) const;
  // Components of the graph linking pairs with score >= threshold.
  Clustering cluster(double threshold) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::int16_t> scores_;  // upper triangle, row-major
};

class BackesModel {
 public:
  explicit BackesModel(const BlockFeatures& block);

  // Complete merge trace (no stop value).
  const MergeTrace& trace() const { return trace_; }
  Clustering cluster(double limit) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  MergeTrace trace_;
};

// ---------------------------------------------------------------------------
// Runs on one block

Clustering run_baseline(const Block& block);
Clustering run_cota(const Block& block, const Corpus& corpus, const CotaParams& params);
Clustering run_schulz(const Block& block, const Corpus& corpus, const SchulzParams& params);
Clustering run_caron(const Block& block, const Corpus& corpus, const CaronParams& params,
                     const GeneralNameList& names);
// Returns the clustering at l = lambda * |block| and the complete trace.
std::pair<Clustering, MergeTrace> run_backes(const Block& block, const Corpus& corpus,
                                             const BackesParams& params);

struct BlockResult {
  Clustering clustering;
  MergeTrace trace;  // Backes only
};

BlockResult run_algorithm(Algorithm algorithm, const Block& block, const Corpus& corpus,
                          const AlgorithmParams& params, const GeneralNameList& names);

}  // namespace namedis
