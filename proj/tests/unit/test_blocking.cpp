#include <doctest.h>

#include <map>

#include "../support.hpp"
#include "namedis/blocking.hpp"

using namespace namedis;
using namespace namedis::test;

TEST_CASE("blocks partition mentions by canonical key") {
  CorpusBuilder b;
  b.paper("P1");
  b.paper("P2");
  b.mention("M1", "P1", "Smith", "John", "a");
  b.mention("M2", "P1", "Smyth", "John", "b");
  b.mention("M3", "P2", "SMITH", "Jane", "c");
  b.mention("M4", "P2", "Smith", "", "d")["initials"] = {"J"};
  b.mention("M5", "P2", "Lee", "");
  const Corpus c = b.build();
  const auto blocks = build_blocks(c);

  // Oracle: group by key with a map.
  std::map<std::string, std::vector<std::uint32_t>> expected;
  for (std::uint32_t m = 0; m < c.mentions().size(); ++m) {
    expected[mention_canonical_key(c.mentions()[m])].push_back(m);
  }
  REQUIRE(blocks.size() == expected.size());
  std::size_t i = 0;
  for (const auto& [key, members] : expected) {
    CHECK(blocks[i].key == key);
    CHECK(blocks[i].members == members);
    ++i;
  }
  CHECK(find_block(blocks, "smith, j").size() == 3);
  CHECK(find_block(blocks, "lee, ").empty_initial);
  CHECK_FALSE(find_block(blocks, "smith, j").empty_initial);
  CHECK(find_block(blocks, "smith, j").mention_ids(c) == std::vector<std::string>{"M1", "M3", "M4"});
}

TEST_CASE("filter keeps blocks with enough gold authors") {
  CorpusBuilder b;
  b.paper("P1");
  for (int i = 0; i < 6; ++i) {
    b.mention("A" + std::to_string(i), "P1", "Alpha", "Ann", "g" + std::to_string(i % 5));
  }
  for (int i = 0; i < 4; ++i) {
    b.mention("B" + std::to_string(i), "P1", "Beta", "Bob", "h" + std::to_string(i));
  }
  b.mention("C0", "P1", "Gamma", "Carl");
  const Corpus c = b.build();
  auto result = filter_blocks(build_blocks(c), c, 5);
  REQUIRE(result.kept.size() == 1);
  CHECK(result.kept[0].key == "alpha, a");
  CHECK(count_gold_authors(result.kept[0], c) == 5);
  CHECK(result.dropped.size() == 2);
  CHECK(result.dropped_mentions == 5);

  auto all = filter_blocks(build_blocks(c), c, 0);
  CHECK(all.kept.size() == 2);  // the block without gold ids is still dropped
}

TEST_CASE("file stems are portable and injective on examples") {
  CHECK(block_file_stem("smith, j") == "smith%2C%20j");
  CHECK(block_file_stem("abc-1") == "abc-1");
  CHECK(block_file_stem("a/b") != block_file_stem("a b"));
  CHECK(block_file_stem("o'neil, p").find('\'') == std::string::npos);
}
