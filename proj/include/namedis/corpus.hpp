#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace namedis {

// Sorted, duplicate-free list of strings.
using StringSet = std::vector<std::string>;

struct Address {
  std::string country;
  std::string city;

  auto operator<=>(const Address&) const = default;
};

struct PaperRecord {
  std::string paper_id;
  std::string title;
  std::string abstract_text;
  std::vector<std::string> title_tokens;
  std::vector<std::string> abstract_tokens;
  std::string journal;  // normalized
  int year = 0;
  StringSet subject_categories;  // normalized
  StringSet keywords;            // normalized
  StringSet references;          // paper ids or opaque external keys, never the own id
  StringSet grant_numbers;
  std::vector<Address> pub_addresses;  // sorted, unique, normalized

  bool operator==(const PaperRecord&) const = default;
};

struct AuthorMention {
  std::string mention_id;
  std::string paper_id;
  std::string surname;
  std::string first_name;
  std::vector<std::string> initials;  // one normalized code point each, first included
  std::optional<std::string> email;   // normalized
  std::vector<Address> author_addresses;
  std::optional<std::string> gold_author_id;

  bool operator==(const AuthorMention&) const = default;
};

// Inverse of the reference lists: for every cited key, the sorted ids of
// the corpus papers citing it.
class CitationIndex {
 public:
  void build(std::span<const PaperRecord> papers);
  const StringSet& citers(const std::string& key) const;
  std::size_t size() const { return citers_.size(); }
  const std::unordered_map<std::string, StringSet>& entries() const { return citers_; }

 private:
  std::unordered_map<std::string, StringSet> citers_;
};

// An ingested corpus. Papers are ordered by paper_id and mentions by
// mention_id, so construction is independent of input order. Immutable
// after construction.
class Corpus {
 public:
  Corpus() = default;
  // Validates referential integrity and builds every index.
  Corpus(std::vector<PaperRecord> papers, std::vector<AuthorMention> mentions);

  std::span<const PaperRecord> papers() const { return papers_; }
  std::span<const AuthorMention> mentions() const { return mentions_; }

  std::optional<std::size_t> paper_index(std::string_view paper_id) const;
  std::optional<std::size_t> mention_index(std::string_view mention_id) const;

  std::size_t paper_index_of(std::size_t mention) const { return mention_paper_[mention]; }
  const PaperRecord& paper_of(std::size_t mention) const { return papers_[mention_paper_[mention]]; }
  std::span<const std::uint32_t> mentions_on_paper(std::size_t paper) const;

  // Block key of each mention (surname + first initial).
  const std::string& canonical_key(std::size_t mention) const { return keys_[mention]; }
  // Canonical names of the other mentions on the same paper, never
  // including the mention's own key.
  const StringSet& coauthors(std::size_t mention) const { return coauthors_[mention]; }
  const CitationIndex& citations() const { return citations_; }

  bool operator==(const Corpus& other) const {
    return papers_ == other.papers_ && mentions_ == other.mentions_;
  }

 private:
  std::vector<PaperRecord> papers_;
  std::vector<AuthorMention> mentions_;
  std::unordered_map<std::string, std::size_t> paper_by_id_;
  std::unordered_map<std::string, std::size_t> mention_by_id_;
  std::vector<std::size_t> mention_paper_;
  std::vector<std::uint32_t> paper_mentions_offsets_;
  std::vector<std::uint32_t> paper_mentions_;
  std::vector<std::string> keys_;
  std::vector<StringSet> coauthors_;
  CitationIndex citations_;
};

// The initial used for blocking: first name if present, else the first
// listed initial.
std::string mention_canonical_key(const AuthorMention& mention);

// JSON-lines ingestion. Errors carry the source name and line number; a
// mention with a dangling paper_id is reported together with all other
// offenders.
Corpus read_corpus(std::istream& papers, std::istream& mentions,
                   std::string_view papers_name = "papers.jsonl",
                   std::string_view mentions_name = "mentions.jsonl");
Corpus ingest_corpus(const std::filesystem::path& papers_path,
                     const std::filesystem::path& mentions_path);
// Reads <dir>/papers.jsonl and <dir>/mentions.jsonl.
Corpus ingest_corpus_dir(const std::filesystem::path& dir);

void write_papers(const Corpus& corpus, std::ostream& out);
void write_mentions(const Corpus& corpus, std::ostream& out);

// FNV-1a 64 over the serialized corpus, as 16 hex digits. Equal for any
// line permutation of the inputs.
std::string corpus_hash(const Corpus& corpus);

}  // namespace namedis
