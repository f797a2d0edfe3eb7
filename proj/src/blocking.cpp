#include "namedis/blocking.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <unordered_set>

namespace namedis {

std::vector<std::string> Block::mention_ids(const Corpus& corpus) const {
  std::vector<std::string> ids;
  ids.reserve(members.size());
  for (auto m : members) ids.push_back(corpus.mentions()[m].mention_id);
  return ids;
}

std::vector<Block> build_blocks(const Corpus& corpus) {
  std::map<std::string, std::vector<std::uint32_t>> groups;
  for (std::size_t i = 0; i < corpus.mentions().size(); ++i) {
    groups[corpus.canonical_key(i)].push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<Block> blocks;
  blocks.reserve(groups.size());
  std::size_t flagged = 0;
  for (auto& [key, members] : groups) {
    Block b;
    b.key = key;
    b.members = std::move(members);
    b.empty_initial = key.ends_with(", ");
    flagged += b.empty_initial;
    blocks.push_back(std::move(b));
  }
  if (flagged > 0) spdlog::warn("{} block(s) have no first initial in their key", flagged);
  return blocks;
}

std::size_t count_gold_authors(const Block& block, const Corpus& corpus) {
  std::unordered_set<std::string_view> ids;
  for (auto m : block.members) {
    const auto& gold = corpus.mentions()[m].gold_author_id;
    if (gold) ids.insert(*gold);
  }
  return ids.size();
}

BlockFilterResult filter_blocks(std::vector<Block> blocks, const Corpus& corpus,
                                std::size_t min_gold_authors) {
  BlockFilterResult result;
  for (auto& block : blocks) {
    const std::size_t authors = count_gold_authors(block, corpus);
    if (authors == 0 || authors < min_gold_authors) {
      result.dropped_mentions += block.size();
      result.dropped.push_back({block.key, block.size(), authors});
    } else {
      result.kept.push_back(std::move(block));
    }
  }
  return result;
}

std::string block_file_stem(const std::string& key) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : key) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

}  // namespace namedis
