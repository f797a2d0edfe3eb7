#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "namedis/config.hpp"

namespace namedis {

// Generator settings. Counts are inclusive ranges drawn uniformly; rates
// are probabilities.
struct GenSpec {
  std::uint64_t seed = 1;
  std::size_t n_blocks = 40;
  std::size_t authors_min = 5;
  std::size_t authors_max = 12;
  std::size_t papers_min = 2;
  std::size_t papers_max = 20;
  // Size tail: a few blocks with many more authors.
  std::size_t tail_blocks = 3;
  std::size_t tail_authors_min = 80;
  std::size_t tail_authors_max = 150;

  std::size_t coauthors_min = 1;  // per paper, besides the core co-author
  std::size_t coauthors_max = 3;
  std::size_t coauthor_pool = 6;      // distinct co-authors per author
  double core_coauthor_rate = 0.6;    // paper lists the author's core co-author
  double shared_coauthor_rate = 0.06;  // co-author drawn from the block-wide pool

  double title_overlap = 0.25;  // title/abstract token from the block-wide vocabulary
  double common_word_rate = 0.2;
  double journal_overlap = 0.3;
  double category_overlap = 0.3;
  double keyword_overlap = 0.2;
  double affiliation_overlap = 0.2;
  double missing_email_rate = 0.4;
  double abstract_rate = 0.7;
  double grant_rate = 0.3;

  double self_citation_rate = 0.3;  // per earlier own paper
  double citation_density = 2.0;    // mean random citations of earlier corpus papers
  std::size_t external_refs = 6;    // references to works outside the corpus
  double shared_reference_rate = 0.3;

  double homonym_rate = 0.3;         // author takes a common first name
  double synonym_rate = 0.15;        // mention shows initials only
  double middle_initial_rate = 0.5;  // author has a middle initial

  int year_min = 1990;
  int year_max = 2018;

  // Reads top-level keys with the field names above; absent keys keep
  // their defaults. Throws ValidationError for unknown keys or bad values.
  static GenSpec from_config(const FlatConfig& config);
  FlatConfig to_config() const;
  void validate() const;
};

struct GeneratedCorpus {
  std::string papers;    // papers.jsonl content
  std::string mentions;  // mentions.jsonl content
  std::size_t focal_blocks = 0;
  std::size_t focal_mentions = 0;
};

// Deterministic in the spec. Focal mentions carry gold ids "A<block>-<k>";
// co-author mentions carry "C<n>" and fall into blocks with fewer than
// five authors.
GeneratedCorpus generate(const GenSpec& spec);

// Writes <dir>/papers.jsonl and <dir>/mentions.jsonl.
void write_generated(const GeneratedCorpus& corpus, const std::filesystem::path& dir);

}  // namespace namedis
