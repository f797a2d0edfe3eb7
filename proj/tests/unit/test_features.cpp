#include <doctest.h>

#include <cmath>

#include "../fixtures.hpp"
#include "../support.hpp"
#include "namedis/features.hpp"

using namespace namedis;
using namespace namedis::test;

TEST_CASE("rule_score fixtures") {
  for (const auto& f : test::rule_fixtures()) {
    CAPTURE(f.name);
    CHECK(test::evaluate(f) == f.expected);
  }
}

TEST_CASE("rule score table reads overrides") {
  auto c = FlatConfig::parse("score.email_exact = 50\nscore.coupling_3 = 9\n");
  const auto t = RuleScoreTable::from_config(c);
  CHECK(t.email_exact == 50);
  CHECK(t.coupling[2] == 9);
  CHECK(t.journal == 6);
  FlatConfig out;
  t.to_config(out);
  CHECK(RuleScoreTable::from_config(out).coupling[2] == 9);
}

TEST_CASE("general first names need enough distinct surnames") {
  CorpusBuilder b;
  b.paper("P");
  const char* surnames[] = {"Aa", "Bb", "Cc", "Cc"};
  int k = 0;
  for (const char* s : surnames) b.mention("M" + std::to_string(k++), "P", s, "Maria");
  b.mention("M9", "P", "Aa", "Olga");
  b.mention("M8", "P", "Bb", "Olga");
  const Corpus c = b.build();
  const auto names = GeneralNameList::build(c, 3);
  CHECK(names.is_general("MARIA"));
  CHECK_FALSE(names.is_general("olga"));
  CHECK(GeneralNameList::build(c, 2).sorted() == std::vector<std::string>{"maria", "olga"});
}

TEST_CASE("tf-idf cosine matches a direct computation") {
  const std::vector<std::vector<std::string>> docs = {{"a", "b", "b"}, {"b", "c"}, {"c", "d"}};
  const IdfTable idf(docs);
  CHECK(idf.idf("a") == doctest::Approx(std::log(3.0)));
  CHECK(idf.idf("zz") == 0.0);
  const double l3 = std::log(3.0);
  const double l15 = std::log(1.5);
  const double expected = (2 * l15 * l15) / (std::sqrt(l3 * l3 + 4 * l15 * l15) * std::sqrt(2.0) * l15);
  CHECK(tfidf_cosine(docs[0], docs[1], idf) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(tfidf_cosine(docs[0], docs[0], idf) == doctest::Approx(1.0));
  CHECK(tfidf_cosine(docs[0], docs[2], idf) == 0.0);
  const std::vector<std::string> empty;
  CHECK(tfidf_cosine(docs[0], empty, idf) == 0.0);
}

TEST_CASE("specificity score over titles") {
  CorpusBuilder b;
  const char* titles[] = {"alpha beta", "alpha gamma", "delta", ""};
  for (int i = 0; i < 4; ++i) {
    const std::string id = std::to_string(i);
    b.paper("P" + id)["title"] = titles[i];
    b.mention("M" + id, "P" + id, "Smith", "John");
  }
  const Corpus c = b.build();
  const std::vector<std::uint32_t> members = {0, 1, 2, 3};
  const auto block = build_block_features(c, members, GeneralNameList{});
  const FieldWeighting w(block);
  CHECK(w.carriers(Field::kTitle) == 3);
  const auto alpha = block.strings.find("alpha");
  CHECK(w.df(Field::kTitle, alpha) == 2);
  CHECK(w.weight(Field::kTitle, alpha) == doctest::Approx(std::log(1.5)));

  auto bundle = [&](int i) { return FieldBundle::of(block.mentions[i], w); };
  const double l15 = std::log(1.5);
  const double l3 = std::log(3.0);
  CHECK(specificity_score(bundle(0), bundle(1), w) == doctest::Approx(l15 / (l15 + l3)));
  CHECK(specificity_score(bundle(0), bundle(2), w) == 0.0);
  CHECK(specificity_score(bundle(0), bundle(3), w) == 0.0);
  CHECK(specificity_score(bundle(3), bundle(3), w) == 0.0);

  auto merged = bundle(0);
  merged.absorb(bundle(1), w);
  CHECK(merged.total[0] == doctest::Approx(l15 + 2 * l3));
  // {alpha, beta, gamma} vs {alpha, gamma}: shared weight equals the smaller side.
  CHECK(specificity_score(merged, bundle(1), w) == doctest::Approx(1.0));
}
