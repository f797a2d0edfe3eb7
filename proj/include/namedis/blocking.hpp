#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "namedis/corpus.hpp"

namespace namedis {

// All mentions sharing one canonical name key.
struct Block {
  std::string key;
  // Corpus mention indices; ascending, hence sorted by mention_id.
  std::vector<std::uint32_t> members;
  // Key built from a mention without any first name or initial.
  bool empty_initial = false;

  std::size_t size() const { return members.size(); }
  std::vector<std::string> mention_ids(const Corpus& corpus) const;
};

// Partition of the corpus mentions by canonical key, sorted by key.
std::vector<Block> build_blocks(const Corpus& corpus);

struct DroppedBlock {
  std::string key;
  std::size_t size = 0;
  std::size_t gold_authors = 0;
};

struct BlockFilterResult {
  std::vector<Block> kept;
  std::vector<DroppedBlock> dropped;  // including blocks without any gold id
  std::size_t dropped_mentions = 0;
};

std::size_t count_gold_authors(const Block& block, const Corpus& corpus);

// Keeps blocks with at least `min_gold_authors` distinct gold author ids.
// Blocks with no gold id at all are always dropped.
BlockFilterResult filter_blocks(std::vector<Block> blocks, const Corpus& corpus,
                                std::size_t min_gold_authors);

// Percent-encodes a block key into a portable file stem; only [a-z0-9-]
// pass through unchanged.
std::string block_file_stem(const std::string& key);

}  // namespace namedis
