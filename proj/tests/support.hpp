#pragma once

#include <deque>
#include <sstream>
#include <string>

#include <json.hpp>

#include "namedis/blocking.hpp"
#include "namedis/corpus.hpp"
#include "namedis/errors.hpp"

namespace namedis::test {

// Builds small corpora from JSON records through the regular reader.
struct CorpusBuilder {
  std::deque<nlohmann::json> papers;
  std::deque<nlohmann::json> mentions;

  nlohmann::json& paper(const std::string& id) {
    papers.push_back({{"paper_id", id}});
    return papers.back();
  }

  nlohmann::json& mention(const std::string& id, const std::string& paper_id, const std::string& surname,
                          const std::string& first_name, const std::string& gold = {}) {
    nlohmann::json m = {{"mention_id", id}, {"paper_id", paper_id}, {"surname", surname}};
    if (!first_name.empty()) {
      m["first_name"] = first_name;
      m["initials"] = nlohmann::json::array({first_name.substr(0, 1)});
    }
    if (!gold.empty()) m["gold_author_id"] = gold;
    mentions.push_back(std::move(m));
    return mentions.back();
  }

  std::string papers_jsonl() const {
    std::string out;
    for (const auto& p : papers) out += p.dump() + "\n";
    return out;
  }
  std::string mentions_jsonl() const {
    std::string out;
    for (const auto& m : mentions) out += m.dump() + "\n";
    return out;
  }

  Corpus build() const {
    std::istringstream p(papers_jsonl());
    std::istringstream m(mentions_jsonl());
    return read_corpus(p, m);
  }
};

inline const Block& find_block(const std::vector<Block>& blocks, const std::string& key) {
  for (const auto& b : blocks) {
    if (b.key == key) return b;
  }
  throw ValidationError("no block " + key);
}

}  // namespace namedis::test
