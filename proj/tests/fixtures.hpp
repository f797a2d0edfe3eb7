#pragma once

// Hand-built fixtures for the pair and cluster formulas. Weights and
// similarities are dyadic so every expected value is exact in binary.

#include <functional>
#include <string>
#include <vector>

#include "namedis/algorithms.hpp"
#include "support.hpp"

namespace namedis::test {

// Mentions MA (paper PA) and MB (paper PB), both "smith, j", sharing
// nothing unless the fixture adds it.
struct PairCorpus {
  CorpusBuilder b;

  PairCorpus() {
    b.paper("PA");
    b.paper("PB");
    b.mention("MA", "PA", "Smith", "")["initials"] = {"J"};
    b.mention("MB", "PB", "Smith", "")["initials"] = {"J"};
  }
  nlohmann::json& pa() { return b.papers[0]; }
  nlohmann::json& pb() { return b.papers[1]; }
  nlohmann::json& ma() { return b.mentions[0]; }
  nlohmann::json& mb() { return b.mentions[1]; }
  void coauthors(const std::string& paper, std::initializer_list<const char*> surnames) {
    for (const char* s : surnames) b.mention(paper + "-" + s, paper, s, "Ann");
  }
  void citers(std::initializer_list<std::vector<std::string>> cited) {
    int k = 0;
    for (const auto& refs : cited) b.paper("Q" + std::to_string(k++))["references"] = refs;
  }
};

struct RuleFixture {
  std::string name;
  PairCorpus corpus;
  GeneralNameList names;
  int expected = 0;
};

inline int evaluate(const RuleFixture& f) {
  const Corpus c = f.corpus.b.build();
  return rule_score(c, *c.mention_index("MA"), *c.mention_index("MB"), RuleScoreTable{}, f.names);
}

inline std::vector<RuleFixture> rule_fixtures() {
  std::vector<RuleFixture> out;
  auto add = [&](std::string name, int expected, const std::function<void(PairCorpus&)>& edit,
                 GeneralNameList names = {}) {
    RuleFixture f{std::move(name), PairCorpus{}, std::move(names), expected};
    edit(f.corpus);
    out.push_back(std::move(f));
  };
  add("nothing shared", 0, [](PairCorpus&) {});
  add("email exact match", 100, [](PairCorpus& p) {
    p.ma()["email"] = "j@x.org";
    p.mb()["email"] = "J@X.org";
  });
  add("more than two initials", 10, [](PairCorpus& p) {
    p.ma()["initials"] = {"J", "K", "L"};
    p.mb()["initials"] = {"J", "K", "L"};
  });
  add("exactly two initials", 5, [](PairCorpus& p) {
    p.ma()["initials"] = {"J", "K"};
    p.mb()["initials"] = {"J", "K", "L"};
  });
  add("initials conflict", -10, [](PairCorpus& p) {
    p.ma()["initials"] = {"J", "K"};
    p.mb()["initials"] = {"J", "M"};
  });
  add("non-general first name", 6, [](PairCorpus& p) {
    p.ma()["first_name"] = "John";
    p.mb()["first_name"] = "john";
  });
  add("general first name", 3, [](PairCorpus& p) {
    p.ma()["first_name"] = "John";
    p.mb()["first_name"] = "John";
  }, GeneralNameList({"john"}));
  add("initial-only first names", 0, [](PairCorpus& p) {
    p.ma()["first_name"] = "J.";
    p.mb()["first_name"] = "J.";
  });
  add("author address", 4, [](PairCorpus& p) {
    p.ma()["author_addresses"] = {{{"country", "DE"}, {"city", "Bonn"}}};
    p.mb()["author_addresses"] = {{{"country", "de"}, {"city", "bonn"}}};
  });
  add("one shared co-author", 4, [](PairCorpus& p) {
    p.coauthors("PA", {"Xu", "Yi"});
    p.coauthors("PB", {"Xu"});
  });
  add("two shared co-authors", 7, [](PairCorpus& p) {
    p.coauthors("PA", {"Xu", "Yi"});
    p.coauthors("PB", {"Xu", "Yi", "Zed"});
  });
  add("four shared co-authors", 10, [](PairCorpus& p) {
    p.coauthors("PA", {"Xu", "Yi", "Zed", "Ole"});
    p.coauthors("PB", {"Xu", "Yi", "Zed", "Ole"});
  });
  add("grant", 10, [](PairCorpus& p) {
    p.pa()["grant_numbers"] = {"G-1", "G-2"};
    p.pb()["grant_numbers"] = {"G-2"};
  });
  add("publication address", 2, [](PairCorpus& p) {
    p.pa()["pub_addresses"] = {{{"country", "fr"}, {"city", "lyon"}}};
    p.pb()["pub_addresses"] = {{{"country", "FR"}, {"city", "Lyon"}}};
  });
  add("subject category", 3, [](PairCorpus& p) {
    p.pa()["subject_categories"] = {"Physics"};
    p.pb()["subject_categories"] = {"physics", "chemistry"};
  });
  add("journal", 6, [](PairCorpus& p) {
    p.pa()["journal"] = "J. Biol.";
    p.pb()["journal"] = "j. biol.";
  });
  add("self-citation", 10, [](PairCorpus& p) { p.pb()["references"] = {"PA"}; });
  const int coupling[] = {2, 4, 6, 8, 10, 10};
  for (int shared = 1; shared <= 6; ++shared) {
    add("coupling " + std::to_string(shared), coupling[shared - 1], [shared](PairCorpus& p) {
      nlohmann::json refs = nlohmann::json::array();
      for (int r = 0; r < shared; ++r) refs.push_back("X" + std::to_string(r));
      p.pa()["references"] = refs;
      p.pb()["references"] = refs;
    });
  }
  const int cocitation[] = {2, 3, 4, 5, 6, 6};
  for (int shared = 1; shared <= 6; ++shared) {
    add("co-citation " + std::to_string(shared), cocitation[shared - 1], [shared](PairCorpus& p) {
      for (int r = 0; r < shared; ++r) p.b.paper("Q" + std::to_string(r))["references"] = {"PA", "PB"};
    });
  }
  add("email plus self-citation", 110, [](PairCorpus& p) {
    p.ma()["email"] = "j@x.org";
    p.mb()["email"] = "j@x.org";
    p.pa()["references"] = {"PB"};
  });
  add("first name, initials, journal, coupling, self-citation", 6 + 5 + 6 + 4 + 10, [](PairCorpus& p) {
    p.ma()["first_name"] = "John";
    p.mb()["first_name"] = "John";
    p.ma()["initials"] = {"J", "K"};
    p.mb()["initials"] = {"J", "K"};
    p.pa()["journal"] = "Cell";
    p.pb()["journal"] = "Cell";
    p.pa()["references"] = {"X1", "X2"};
    p.pb()["references"] = {"X1", "X2", "PA"};
  });
  add("conflicting initials against an email match", 90, [](PairCorpus& p) {
    p.ma()["email"] = "j@x.org";
    p.mb()["email"] = "j@x.org";
    p.ma()["initials"] = {"J", "K"};
    p.mb()["initials"] = {"J", "L"};
  });
  return out;
}

struct SchulzFixture {
  std::string name;
  PairCorpus corpus;
  SchulzParams params;
  double expected = 0;
};

inline double evaluate(const SchulzFixture& f) {
  const Corpus c = f.corpus.b.build();
  return mention_similarity_schulz(c, *c.mention_index("MA"), *c.mention_index("MB"), f.params);
}

inline SchulzParams schulz_weights(double a, double s, double r, double c) {
  SchulzParams p;
  p.alpha_a = a;
  p.alpha_s = s;
  p.alpha_r = r;
  p.alpha_c = c;
  return p;
}

inline std::vector<SchulzFixture> schulz_fixtures() {
  std::vector<SchulzFixture> out;
  auto add = [&](std::string name, SchulzParams params, double expected,
                 const std::function<void(PairCorpus&)>& edit) {
    SchulzFixture f{std::move(name), PairCorpus{}, params, expected};
    edit(f.corpus);
    out.push_back(std::move(f));
  };
  add("no overlap", schulz_weights(1, 1, 1, 1), 0.0, [](PairCorpus&) {});
  add("mutual citation", schulz_weights(0, 1, 0, 0), 2.0, [](PairCorpus& p) {
    p.pa()["references"] = {"PB"};
    p.pb()["references"] = {"PA"};
  });
  add("one-way citation", schulz_weights(0, 1, 0, 0), 1.0, [](PairCorpus& p) { p.pb()["references"] = {"PA"}; });
  add("identical co-authors", schulz_weights(1, 0, 0, 0), 1.0, [](PairCorpus& p) {
    p.coauthors("PA", {"Xu", "Yi"});
    p.coauthors("PB", {"Xu", "Yi"});
  });
  add("co-author overlap over the smaller set", schulz_weights(1, 0, 0, 0), 0.5, [](PairCorpus& p) {
    p.coauthors("PA", {"Xu", "Yi"});
    p.coauthors("PB", {"Xu", "Zed", "Ole"});
  });
  add("co-author weight scales the ratio", schulz_weights(2.5, 0, 0, 0), 1.25, [](PairCorpus& p) {
    p.coauthors("PA", {"Xu", "Yi"});
    p.coauthors("PB", {"Xu", "Zed", "Ole"});
  });
  add("co-authors on one side only", schulz_weights(1, 1, 1, 1), 0.0,
      [](PairCorpus& p) { p.coauthors("PA", {"Xu"}); });
  add("shared references are counted", schulz_weights(0, 0, 0.25, 0), 0.75, [](PairCorpus& p) {
    p.pa()["references"] = {"X1", "X2", "X3", "X4"};
    p.pb()["references"] = {"X1", "X2", "X3"};
  });
  add("shared citers over the smaller set", schulz_weights(0, 0, 0, 0.5), 0.5, [](PairCorpus& p) {
    p.citers({{"PA", "PB"}, {"PA"}});
  });
  add("two of four citers shared", schulz_weights(0, 0, 0, 1), 0.5, [](PairCorpus& p) {
    p.citers({{"PA", "PB"}, {"PA", "PB"}, {"PA"}, {"PA"}, {"PB"}, {"PB"}});
  });
  add("citers on one side only", schulz_weights(1, 1, 1, 1), 0.0, [](PairCorpus& p) { p.citers({{"PA"}}); });
  add("all four terms", schulz_weights(1, 1, 0.25, 0.25), 1.0 + 2.0 + 0.25, [](PairCorpus& p) {
    // Citer sets {PB} and {PA} are disjoint.
    p.coauthors("PA", {"Xu"});
    p.coauthors("PB", {"Xu"});
    p.pa()["references"] = {"PB", "X1"};
    p.pb()["references"] = {"PA", "X1"};
  });
  add("zero weight silences a term", schulz_weights(1, 1, 0, 1), 0.0, [](PairCorpus& p) {
    p.pa()["references"] = {"X1"};
    p.pb()["references"] = {"X1"};
  });
  return out;
}

struct ClusterFixture {
  std::string name;
  std::vector<std::vector<double>> sims;  // symmetric, over gamma + kappa positions
  std::vector<std::uint32_t> gamma;
  std::vector<std::uint32_t> kappa;
  double beta2 = 0;
  double expected = 0;
};

inline double evaluate(const ClusterFixture& f) {
  const auto& s = f.sims;
  return cluster_similarity_schulz(f.gamma, f.kappa, [&s](std::uint32_t i, std::uint32_t j) { return s[i][j]; },
                                   f.beta2);
}

inline std::vector<ClusterFixture> cluster_fixtures() {
  // Positions 0-1 form gamma, 2-4 form kappa in the 2 x 3 cases.
  const std::vector<std::vector<double>> mixed = {{0, 0.5, 0.25, 0.75, 1.0},
                                                  {0.5, 0, 0.625, 0.5, 0},
                                                  {0.25, 0.625, 0, 1, 1},
                                                  {0.75, 0.5, 1, 0, 1},
                                                  {1.0, 0, 1, 1, 0}};
  const std::vector<std::vector<double>> pair = {{0, 0.75}, {0.75, 0}};
  return {
      {"singletons above the gate", pair, {0}, {1}, 0.5, 0.75},
      {"singletons at the gate", pair, {0}, {1}, 0.75, 0.0},
      {"singletons below the gate", pair, {0}, {1}, 1.0, 0.0},
      {"negative gate keeps zero pairs at zero", pair, {0}, {1}, -1.0, 0.75},
      {"2x3 gate 0.5", mixed, {0, 1}, {2, 3, 4}, 0.5, (0.75 + 1.0 + 0.625) / 6.0},
      {"2x3 gate 0", mixed, {0, 1}, {2, 3, 4}, 0.0, (0.25 + 0.75 + 1.0 + 0.625 + 0.5) / 6.0},
      {"2x3 gate 0.7", mixed, {0, 1}, {2, 3, 4}, 0.7, (0.75 + 1.0) / 6.0},
      {"2x3 everything gated", mixed, {0, 1}, {2, 3, 4}, 1.0, 0.0},
      {"1x3", mixed, {0}, {2, 3, 4}, 0.5, (0.75 + 1.0) / 3.0},
      {"3x2 reversed roles", mixed, {2, 3, 4}, {0, 1}, 0.5, (0.75 + 1.0 + 0.625) / 6.0},
      {"1x1 inside kappa", mixed, {2}, {3}, 0.5, 1.0},
      {"2x2", mixed, {0, 1}, {2, 3}, 0.25, (0.75 + 0.625 + 0.5) / 4.0},
  };
}

}  // namespace namedis::test
