#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "namedis/blocking.hpp"
#include "namedis/config.hpp"
#include "namedis/corpus.hpp"

namespace namedis {

// Sorted, duplicate-free list of interned ids.
using IdSet = std::vector<std::uint32_t>;
inline constexpr std::uint32_t kNoId = std::numeric_limits<std::uint32_t>::max();

template <class T>
std::size_t intersection_size(std::span<const T> a, std::span<const T> b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

template <class T>
std::size_t intersection_size(const std::vector<T>& a, const std::vector<T>& b) {
  return intersection_size(std::span<const T>(a), std::span<const T>(b));
}

// |a ∩ b| / min(|a|, |b|) over sorted sets; 0 when either is empty.
template <class T>
double overlap_min_normalized(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty() || b.empty()) return 0.0;
  return static_cast<double>(intersection_size(a, b)) /
         static_cast<double>(std::min(a.size(), b.size()));
}

// Maps strings to dense ids. Ids are only meaningful within one interner.
class Interner {
 public:
  std::uint32_t intern(std::string_view s);
  std::uint32_t find(std::string_view s) const;  // kNoId if unseen
  const std::string& str(std::uint32_t id) const { return strings_[id]; }
  std::size_t size() const { return strings_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> strings_;
};

// The eight metadata fields scored by the specificity similarity.
enum class Field : std::uint8_t {
  kTitle,
  kAbstract,
  kAffiliation,
  kSubject,
  kKeyword,
  kCoauthor,
  kCitedAuthor,
  kEmail,
};
inline constexpr std::size_t kFieldCount = 8;
std::string_view field_name(Field field);

// Per-mention features with every string interned, for fast pair scoring.
struct MentionFeatures {
  std::uint32_t mention = 0;   // corpus mention index
  std::uint32_t paper_id = kNoId;
  std::uint32_t email = kNoId;
  std::uint32_t first_name = kNoId;  // full first name only
  bool general_first_name = false;
  std::vector<std::uint32_t> initials;
  std::uint32_t journal = kNoId;
  IdSet coauthors;
  IdSet references;
  IdSet citers;
  IdSet subjects;
  IdSet grants;
  IdSet author_addresses;
  IdSet pub_addresses;
  std::vector<std::uint32_t> title_terms;    // sorted multiset
  std::vector<std::uint32_t> journal_terms;  // sorted multiset
  std::array<IdSet, kFieldCount> fields;     // specificity fields
};

class GeneralNameList;

// Features of one block's mentions, in block member order.
struct BlockFeatures {
  Interner strings;
  std::vector<MentionFeatures> mentions;

  std::size_t size() const { return mentions.size(); }
};

BlockFeatures build_block_features(const Corpus& corpus, std::span<const std::uint32_t> members,
                                   const GeneralNameList& names);

// ---------------------------------------------------------------------------
// Rule-based scoring

// One score per rule row. Defaults are the published table.
struct RuleScoreTable {
  int email_exact = 100;
  int initials_two = 5;
  int initials_more = 10;
  int initials_conflict = -10;
  int first_name_general = 3;
  int first_name_nongeneral = 6;
  int author_address = 4;
  int coauthor_1 = 4;
  int coauthor_2 = 7;
  int coauthor_gt2 = 10;
  int grant = 10;
  int pub_address = 2;
  int subject_category = 3;
  int journal = 6;
  int self_citation = 10;
  std::array<int, 4> coupling = {2, 4, 6, 8};
  int coupling_gt4 = 10;
  std::array<int, 4> cocitation = {2, 3, 4, 5};
  int cocitation_gt4 = 6;

  // Reads `score.<row>` keys (e.g. score.coupling_3); absent keys keep
  // their defaults.
  static RuleScoreTable from_config(const FlatConfig& config);
  void to_config(FlatConfig& config) const;
};

// Which row of each tiered field fired for a pair. Zero means no row.
struct RuleMatch {
  bool email = false;
  int initials = 0;    // 2: exactly two match, 3: more than two, -1: conflict
  int first_name = 0;  // 1: general, 2: non-general
  bool author_address = false;
  int coauthors = 0;   // shared count capped at 3
  bool grant = false;
  bool pub_address = false;
  bool subject = false;
  bool journal = false;
  bool self_citation = false;
  int coupling = 0;    // shared references capped at 5
  int cocitation = 0;  // shared citers capped at 5
};

RuleMatch match_rules(const MentionFeatures& a, const MentionFeatures& b);
int score_match(const RuleMatch& match, const RuleScoreTable& table);

inline int rule_score(const MentionFeatures& a, const MentionFeatures& b,
                      const RuleScoreTable& table) {
  return score_match(match_rules(a, b), table);
}

// Convenience form over corpus mention indices.
int rule_score(const Corpus& corpus, std::size_t m1, std::size_t m2, const RuleScoreTable& table,
               const GeneralNameList& names);

// First names that co-occur with at least `min_surnames` distinct surnames.
class GeneralNameList {
 public:
  static constexpr std::size_t kDefaultMinSurnames = 20;

  GeneralNameList() = default;
  explicit GeneralNameList(std::unordered_set<std::string> names) : names_(std::move(names)) {}

  static GeneralNameList build(const Corpus& corpus, std::size_t min_surnames = kDefaultMinSurnames);

  // `first_name` is normalized before lookup.
  bool is_general(std::string_view first_name) const;
  std::size_t size() const { return names_.size(); }
  std::vector<std::string> sorted() const;

 private:
  std::unordered_set<std::string> names_;
};

inline GeneralNameList build_general_names(const Corpus& corpus,
                                           std::size_t min_surnames = GeneralNameList::kDefaultMinSurnames) {
  return GeneralNameList::build(corpus, min_surnames);
}

// ---------------------------------------------------------------------------
// TF-IDF cosine

// Inverse document frequencies ln(N / df) over a document collection.
class IdfTable {
 public:
  IdfTable() = default;
  explicit IdfTable(std::span<const std::vector<std::string>> documents);

  double idf(const std::string& term) const;  // 0 for unseen terms
  std::size_t documents() const { return documents_; }

 private:
  std::unordered_map<std::string, double> idf_;
  std::size_t documents_ = 0;
};

// Cosine of raw-count TF x IDF vectors; 0 when either vector is zero.
double tfidf_cosine(std::span<const std::string> doc_a, std::span<const std::string> doc_b,
                    const IdfTable& idf);

// ---------------------------------------------------------------------------
// Specificity similarity

// Token weights ln(N / df) per field over one block, where N counts the
// block mentions that carry the field at all.
class FieldWeighting {
 public:
  FieldWeighting() = default;
  explicit FieldWeighting(const BlockFeatures& block);

  double weight(Field field, std::uint32_t token) const {
    const auto& w = weights_[static_cast<std::size_t>(field)];
    return token < w.size() ? w[token] : 0.0;
  }
  std::size_t carriers(Field field) const { return carriers_[static_cast<std::size_t>(field)]; }
  std::uint32_t df(Field field, std::uint32_t token) const {
    const auto& d = df_[static_cast<std::size_t>(field)];
    return token < d.size() ? d[token] : 0;
  }
  const std::vector<double>& weights(Field field) const {
    return weights_[static_cast<std::size_t>(field)];
  }

 private:
  std::array<std::vector<double>, kFieldCount> weights_;
  std::array<std::vector<std::uint32_t>, kFieldCount> df_;
  std::array<std::size_t, kFieldCount> carriers_{};
};

// Union of a cluster's field tokens with cached total weights.
struct FieldBundle {
  std::array<IdSet, kFieldCount> tokens;
  std::array<double, kFieldCount> total{};

  static FieldBundle of(const MentionFeatures& mention, const FieldWeighting& w);
  void absorb(const FieldBundle& other, const FieldWeighting& w);
};

// Mean over fields present on either side of
// (shared weight) / min(total weight of each side), clamped to [0, 1].
double specificity_score(const FieldBundle& a, const FieldBundle& b, const FieldWeighting& w);

}  // namespace namedis
