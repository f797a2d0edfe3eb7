#include "namedis/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>
#include <set>
#include <unordered_set>

#include "namedis/corpus.hpp"
#include "namedis/errors.hpp"

namespace namedis {
namespace {

using ordered_json = nlohmann::ordered_json;

// One named stream per entity type and index; mt19937_64 output is fixed by
// the standard, and the helpers below avoid library distributions so the
// output is identical across standard libraries.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : stream) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    engine_.seed(mix(mix(seed ^ h) + index));
  }

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  // Skewed towards small indices.
  std::size_t skewed(std::size_t n) { return below(below(n) + 1); }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  std::mt19937_64 engine_;
};

constexpr std::array<const char*, 20> kSyllables = {"ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "be", "da",
                                                    "fe", "gu", "ha", "ji", "ko", "la", "mu", "no", "pi", "re"};

// Distinct ids give distinct words; the class prefix keeps word families
// apart.
std::string word(std::string_view prefix, std::uint64_t id) {
  std::string s(prefix);
  int n = 0;
  do {
    s += kSyllables[id % kSyllables.size()];
    id /= kSyllables.size();
    ++n;
  } while (id > 0 || n < 2);
  return s;
}

std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

constexpr std::array<const char*, 24> kCommonWords = {
    "the",      "of",     "and",      "in",       "for",      "on",     "analysis", "study",
    "model",    "data",   "effects",  "approach", "new",      "using",  "based",    "evidence",
    "systems",  "theory", "method",   "results",  "review",   "case",   "role",     "towards"};

constexpr std::array<const char*, 16> kCountries = {"germany", "usa",    "france", "china",  "japan",  "italy",
                                                    "spain",   "brazil", "canada", "india",  "sweden", "poland",
                                                    "norway",  "chile",  "kenya",  "egypt"};

struct Person {
  std::string surname;
  std::string first_name;
  std::vector<std::string> initials;
  std::optional<std::string> email;
  Address address;
  std::string gold;
};

struct Author {
  Person person;
  std::size_t papers = 0;
  int start_year = 0;
  std::vector<std::string> topic;
  std::vector<std::string> journals;
  std::vector<std::string> categories;
  std::vector<std::string> keywords;
  std::vector<std::string> grants;
  std::vector<std::string> externals;
  std::size_t core = 0;
  std::vector<Person> pool;
};

struct BlockShared {
  std::vector<std::string> vocabulary;
  std::vector<std::string> journals;
  std::vector<std::string> categories;
  std::vector<std::string> keywords;
  std::vector<std::string> externals;
  std::vector<Address> addresses;
  std::vector<Person> coauthors;
};

struct Paper {
  std::string id;
  int year = 0;
  std::size_t block = 0;
  std::size_t author = 0;
  ordered_json json;
  std::vector<std::string> references;
};

Address city(std::string_view prefix, std::uint64_t id, Rng& rng) {
  return {kCountries[rng.below(kCountries.size())], word(prefix, id)};
}

Person coauthor_person(std::size_t block, std::size_t owner, std::size_t k, Rng& rng) {
  Person p;
  const std::uint64_t id = block * 100000 + owner * 100 + k;
  p.surname = capitalized(word("xe", id));
  const char letter = static_cast<char>('a' + rng.below(26));
  p.first_name = rng.chance(0.5) ? capitalized(std::string(1, letter) + word("", rng.below(400))) : "";
  p.initials = {std::string(1, letter)};
  if (rng.chance(0.3)) p.email = word("xe", id) + "@" + word("inst", rng.below(50)) + ".org";
  p.address = city("yo", id, rng);
  p.gold = "C" + std::to_string(block) + "-" + std::to_string(owner) + "-" + std::to_string(k);
  return p;
}

std::string pick(const std::vector<std::string>& v, Rng& rng) { return v[rng.skewed(v.size())]; }

std::vector<std::string> text_tokens(const GenSpec& spec, const Author& a, const BlockShared& shared,
                                     std::size_t n, Rng& rng) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.chance(spec.title_overlap)) {
      out.push_back(pick(shared.vocabulary, rng));
    } else if (rng.chance(spec.common_word_rate)) {
      out.emplace_back(kCommonWords[rng.below(kCommonWords.size())]);
    } else {
      out.push_back(pick(a.topic, rng));
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s += ' ';
    s += t;
  }
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

ordered_json addresses_json(const std::vector<Address>& list) {
  ordered_json out = ordered_json::array();
  for (const auto& a : list) out.push_back(ordered_json{{"country", a.country}, {"city", a.city}});
  return out;
}

ordered_json mention_json(const std::string& mention_id, const std::string& paper_id, const Person& p,
                          const std::string& first_name, const Address& address,
                          const std::optional<std::string>& email) {
  ordered_json m;
  m["mention_id"] = mention_id;
  m["paper_id"] = paper_id;
  m["surname"] = p.surname;
  m["first_name"] = first_name;
  m["initials"] = p.initials;
  m["email"] = email ? ordered_json(*email) : ordered_json(nullptr);
  m["author_addresses"] = addresses_json({address});
  m["gold_author_id"] = p.gold;
  return m;
}

std::string padded(char prefix, std::size_t n, int width) {
  std::string digits = std::to_string(n);
  return std::string(1, prefix) + std::string(width > static_cast<int>(digits.size()) ? width - digits.size() : 0, '0') +
         digits;
}

}  // namespace

GenSpec GenSpec::from_config(const FlatConfig& config) {
  GenSpec s;
  const GenSpec defaults;
  const FlatConfig known = defaults.to_config();
  for (const auto& [key, _] : config.entries()) {
    if (!known.has(key)) throw ValidationError("unknown generator key '" + key + "'");
  }
  auto count = [&](const char* key, std::size_t& field) {
    const long long v = config.integer_or(key, static_cast<long long>(field));
    if (v < 0) throw ValidationError(std::string("generator key '") + key + "' must be non-negative");
    field = static_cast<std::size_t>(v);
  };
  auto rate = [&](const char* key, double& field) { field = config.number_or(key, field); };
  const long long seed = config.integer_or("seed", static_cast<long long>(s.seed));
  if (seed < 0) throw ValidationError("generator seed must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);
  count("n_blocks", s.n_blocks);
  count("authors_min", s.authors_min);
  count("authors_max", s.authors_max);
  count("papers_min", s.papers_min);
  count("papers_max", s.papers_max);
  count("tail_blocks", s.tail_blocks);
  count("tail_authors_min", s.tail_authors_min);
  count("tail_authors_max", s.tail_authors_max);
  count("coauthors_min", s.coauthors_min);
  count("coauthors_max", s.coauthors_max);
  count("coauthor_pool", s.coauthor_pool);
  rate("core_coauthor_rate", s.core_coauthor_rate);
  rate("shared_coauthor_rate", s.shared_coauthor_rate);
  rate("title_overlap", s.title_overlap);
  rate("common_word_rate", s.common_word_rate);
  rate("journal_overlap", s.journal_overlap);
  rate("category_overlap", s.category_overlap);
  rate("keyword_overlap", s.keyword_overlap);
  rate("affiliation_overlap", s.affiliation_overlap);
  rate("missing_email_rate", s.missing_email_rate);
  rate("abstract_rate", s.abstract_rate);
  rate("grant_rate", s.grant_rate);
  rate("self_citation_rate", s.self_citation_rate);
  rate("citation_density", s.citation_density);
  count("external_refs", s.external_refs);
  rate("shared_reference_rate", s.shared_reference_rate);
  rate("homonym_rate", s.homonym_rate);
  rate("synonym_rate", s.synonym_rate);
  rate("middle_initial_rate", s.middle_initial_rate);
  s.year_min = static_cast<int>(config.integer_or("year_min", s.year_min));
  s.year_max = static_cast<int>(config.integer_or("year_max", s.year_max));
  s.validate();
  return s;
}

FlatConfig GenSpec::to_config() const {
  FlatConfig c;
  auto n = [&](const char* key, double v) { c.set(key, v); };
  n("seed", static_cast<double>(seed));
  n("n_blocks", static_cast<double>(n_blocks));
  n("authors_min", static_cast<double>(authors_min));
  n("authors_max", static_cast<double>(authors_max));
  n("papers_min", static_cast<double>(papers_min));
  n("papers_max", static_cast<double>(papers_max));
  n("tail_blocks", static_cast<double>(tail_blocks));
  n("tail_authors_min", static_cast<double>(tail_authors_min));
  n("tail_authors_max", static_cast<double>(tail_authors_max));
  n("coauthors_min", static_cast<double>(coauthors_min));
  n("coauthors_max", static_cast<double>(coauthors_max));
  n("coauthor_pool", static_cast<double>(coauthor_pool));
  n("core_coauthor_rate", core_coauthor_rate);
  n("shared_coauthor_rate", shared_coauthor_rate);
  n("title_overlap", title_overlap);
  n("common_word_rate", common_word_rate);
  n("journal_overlap", journal_overlap);
  n("category_overlap", category_overlap);
  n("keyword_overlap", keyword_overlap);
  n("affiliation_overlap", affiliation_overlap);
  n("missing_email_rate", missing_email_rate);
  n("abstract_rate", abstract_rate);
  n("grant_rate", grant_rate);
  n("self_citation_rate", self_citation_rate);
  n("citation_density", citation_density);
  n("external_refs", static_cast<double>(external_refs));
  n("shared_reference_rate", shared_reference_rate);
  n("homonym_rate", homonym_rate);
  n("synonym_rate", synonym_rate);
  n("middle_initial_rate", middle_initial_rate);
  n("year_min", year_min);
  n("year_max", year_max);
  return c;
}

void GenSpec::validate() const {
  auto range = [](const char* name, std::size_t lo, std::size_t hi) {
    if (lo > hi) throw ValidationError(std::string("infeasible generator spec: ") + name + "_min > " + name + "_max");
  };
  range("authors", authors_min, authors_max);
  range("papers", papers_min, papers_max);
  range("tail_authors", tail_authors_min, tail_authors_max);
  range("coauthors", coauthors_min, coauthors_max);
  if (authors_min == 0 || (tail_blocks > 0 && tail_authors_min == 0)) {
    throw ValidationError("infeasible generator spec: blocks need at least one author");
  }
  if (n_blocks + tail_blocks == 0) throw ValidationError("infeasible generator spec: no blocks to generate");
  if (papers_min == 0) throw ValidationError("infeasible generator spec: papers_min must be at least 1");
  if (coauthor_pool == 0 && coauthors_max > 0) {
    throw ValidationError("infeasible generator spec: coauthor_pool is 0 but co-authors are requested");
  }
  if (year_min > year_max) throw ValidationError("infeasible generator spec: year_min > year_max");
  for (auto [name, p] : {std::pair{"core_coauthor_rate", core_coauthor_rate},
                         {"shared_coauthor_rate", shared_coauthor_rate},
                         {"title_overlap", title_overlap},
                         {"common_word_rate", common_word_rate},
                         {"journal_overlap", journal_overlap},
                         {"category_overlap", category_overlap},
                         {"keyword_overlap", keyword_overlap},
                         {"affiliation_overlap", affiliation_overlap},
                         {"missing_email_rate", missing_email_rate},
                         {"abstract_rate", abstract_rate},
                         {"grant_rate", grant_rate},
                         {"self_citation_rate", self_citation_rate},
                         {"shared_reference_rate", shared_reference_rate},
                         {"homonym_rate", homonym_rate},
                         {"synonym_rate", synonym_rate},
                         {"middle_initial_rate", middle_initial_rate}}) {
    if (!(p >= 0 && p <= 1)) throw ValidationError(std::string("generator rate '") + name + "' must lie in [0, 1]");
  }
  if (!(citation_density >= 0) || !std::isfinite(citation_density)) {
    throw ValidationError("citation_density must be a finite non-negative number");
  }
}

GeneratedCorpus generate(const GenSpec& spec) {
  spec.validate();
  const std::size_t total_blocks = spec.n_blocks + spec.tail_blocks;
  std::vector<Paper> papers;
  std::vector<ordered_json> mentions;
  std::size_t mention_counter = 0;
  GeneratedCorpus result;
  result.focal_blocks = total_blocks;
  std::vector<std::vector<std::vector<std::size_t>>> author_papers(total_blocks);  // paper indices

  for (std::size_t b = 0; b < total_blocks; ++b) {
    const bool tail = b >= spec.n_blocks;
    Rng brng(spec.seed, "blocks", b);
    const char letter = static_cast<char>('a' + (b * 7) % 26);
    const std::string surname = capitalized(word("zo", b));
    const std::size_t n_authors =
        tail ? brng.between(spec.tail_authors_min, spec.tail_authors_max) : brng.between(spec.authors_min, spec.authors_max);

    BlockShared shared;
    for (std::uint64_t k = 0; k < 40; ++k) shared.vocabulary.push_back(word("wy", b * 100 + k));
    for (std::uint64_t k = 0; k < 5; ++k) shared.journals.push_back("journal of " + word("wy", b * 100 + 40 + k));
    for (std::uint64_t k = 0; k < 4; ++k) shared.categories.push_back("field " + word("qa", b * 10 + k));
    for (std::uint64_t k = 0; k < 10; ++k) shared.keywords.push_back(word("wy", b * 100 + 50 + k) + " methods");
    for (std::uint64_t k = 0; k < 30; ++k) shared.externals.push_back("X" + std::to_string(b) + "-" + std::to_string(k));
    for (std::uint64_t k = 0; k < 3; ++k) shared.addresses.push_back(city("yi", b * 10 + k, brng));
    for (std::size_t k = 0; k < 20; ++k) shared.coauthors.push_back(coauthor_person(b, 999, k, brng));

    std::vector<Author> authors(n_authors);
    std::set<std::string> used_names;
    for (std::size_t a = 0; a < n_authors; ++a) {
      Rng arng(spec.seed, "authors", b * 1000 + a);
      Author& au = authors[a];
      Person& p = au.person;
      p.surname = surname;
      if (arng.chance(spec.homonym_rate)) {
        static constexpr std::array<const char*, 3> kCommon = {"ana", "elo", "ori"};
        p.first_name = capitalized(std::string(1, letter) + kCommon[arng.below(kCommon.size())]);
      } else {
        do {
          p.first_name = capitalized(std::string(1, letter) + word("a", arng.below(8000)));
        } while (!used_names.insert(p.first_name).second);
      }
      p.initials = {std::string(1, letter)};
      if (arng.chance(spec.middle_initial_rate)) p.initials.emplace_back(1, static_cast<char>('a' + arng.below(26)));
      const std::uint64_t uid = b * 1000 + a;
      p.email = word("ve", uid) + "@" + word("inst", arng.below(200)) + ".edu";
      p.address = city("yo", 900000 + uid, arng);
      p.gold = "A" + std::to_string(b) + "-" + std::to_string(a);
      au.papers = arng.between(spec.papers_min, spec.papers_max);
      au.start_year = spec.year_min + static_cast<int>(arng.below(static_cast<std::size_t>(spec.year_max - spec.year_min) + 1));
      for (std::uint64_t k = 0; k < 30; ++k) au.topic.push_back(word("qu", uid * 100 + k));
      for (std::uint64_t k = 0; k < 3; ++k) au.journals.push_back("journal of " + word("qu", uid * 100 + 30 + k));
      for (std::uint64_t k = 0; k < 3; ++k) au.categories.push_back("field " + word("qi", uid * 10 + k));
      for (std::uint64_t k = 0; k < 12; ++k) au.keywords.push_back(word("qu", uid * 100 + 40 + k) + " analysis");
      for (std::uint64_t k = 0; k < 2; ++k) au.grants.push_back("G" + std::to_string(uid) + "-" + std::to_string(k));
      for (std::uint64_t k = 0; k < 40; ++k) {
        au.externals.push_back("X" + std::to_string(b) + "-" + std::to_string(a) + "-" + std::to_string(k));
      }
      for (std::size_t k = 0; k < std::max<std::size_t>(spec.coauthor_pool, 1); ++k) {
        au.pool.push_back(coauthor_person(b, a, k, arng));
      }
      au.core = 0;
    }

    author_papers[b].resize(n_authors);
    for (std::size_t a = 0; a < n_authors; ++a) {
      Author& au = authors[a];
      for (std::size_t k = 0; k < au.papers; ++k) {
        Rng prng(spec.seed, "papers", (b * 1000 + a) * 1000 + k);
        Paper paper;
        paper.id = padded('P', papers.size() + 1, 7);
        paper.block = b;
        paper.author = a;
        paper.year = std::min(spec.year_max, au.start_year + static_cast<int>(prng.below(16)));
        ordered_json& j = paper.json;
        j["paper_id"] = paper.id;
        j["title"] = join(text_tokens(spec, au, shared, prng.between(6, 12), prng));
        j["abstract"] = prng.chance(spec.abstract_rate) ? join(text_tokens(spec, au, shared, prng.between(25, 50), prng))
                                                        : std::string();
        j["journal"] = prng.chance(spec.journal_overlap) ? pick(shared.journals, prng) : pick(au.journals, prng);
        j["year"] = paper.year;
        std::set<std::string> categories, keywords, grants;
        for (std::size_t c = prng.between(1, 3); c-- > 0;) {
          categories.insert(prng.chance(spec.category_overlap) ? pick(shared.categories, prng) : pick(au.categories, prng));
        }
        for (std::size_t c = prng.between(2, 5); c-- > 0;) {
          keywords.insert(prng.chance(spec.keyword_overlap) ? pick(shared.keywords, prng) : pick(au.keywords, prng));
        }
        if (prng.chance(spec.grant_rate)) grants.insert(pick(au.grants, prng));
        j["subject_categories"] = categories;
        j["keywords"] = keywords;
        j["references"] = ordered_json::array();  // filled after all papers exist
        j["grant_numbers"] = grants;

        // Authors on the paper: the focal mention, then co-authors.
        std::vector<const Person*> coauthors;
        if (prng.chance(spec.core_coauthor_rate)) coauthors.push_back(&au.pool[au.core]);
        for (std::size_t c = prng.between(spec.coauthors_min, spec.coauthors_max); c-- > 0;) {
          const Person* q = prng.chance(spec.shared_coauthor_rate) ? &shared.coauthors[prng.below(shared.coauthors.size())]
                                                                   : &au.pool[prng.skewed(au.pool.size())];
          if (std::find(coauthors.begin(), coauthors.end(), q) == coauthors.end()) coauthors.push_back(q);
        }
        std::set<Address> pub;
        const Address focal_address =
            prng.chance(spec.affiliation_overlap) ? shared.addresses[prng.below(shared.addresses.size())] : au.person.address;
        pub.insert(focal_address);
        const bool initials_only = prng.chance(spec.synonym_rate);
        const std::optional<std::string> email =
            prng.chance(spec.missing_email_rate) ? std::nullopt : au.person.email;
        mentions.push_back(mention_json(padded('M', ++mention_counter, 8), paper.id, au.person,
                                        initials_only ? std::string() : au.person.first_name, focal_address, email));
        ++result.focal_mentions;
        for (const Person* q : coauthors) {
          pub.insert(q->address);
          mentions.push_back(mention_json(padded('M', ++mention_counter, 8), paper.id, *q, q->first_name, q->address, q->email));
        }
        j["pub_addresses"] = addresses_json(std::vector<Address>(pub.begin(), pub.end()));
        author_papers[b][a].push_back(papers.size());
        papers.push_back(std::move(paper));
      }
    }
  }

  // References: own earlier papers, random earlier corpus papers, and
  // external works. Only strictly earlier years are cited.
  std::vector<std::size_t> by_year(papers.size());
  for (std::size_t i = 0; i < papers.size(); ++i) by_year[i] = i;
  std::stable_sort(by_year.begin(), by_year.end(),
                   [&](std::size_t x, std::size_t y) { return papers[x].year < papers[y].year; });
  for (std::size_t i = 0; i < papers.size(); ++i) {
    Paper& paper = papers[i];
    Rng crng(spec.seed, "citations", i);
    std::set<std::string> refs;
    for (std::size_t other : author_papers[paper.block][paper.author]) {
      if (papers[other].year < paper.year && crng.chance(spec.self_citation_rate)) refs.insert(papers[other].id);
    }
    const auto earlier = static_cast<std::size_t>(
        std::lower_bound(by_year.begin(), by_year.end(), paper.year,
                         [&](std::size_t x, int year) { return papers[x].year < year; }) -
        by_year.begin());
    if (earlier > 0) {
      const auto n = crng.below(static_cast<std::size_t>(std::llround(2 * spec.citation_density)) + 1);
      for (std::size_t c = 0; c < n; ++c) refs.insert(papers[by_year[crng.below(earlier)]].id);
    }
    const std::string prefix = "X" + std::to_string(paper.block) + "-" + std::to_string(paper.author) + "-";
    for (std::size_t c = 0; c < spec.external_refs; ++c) {
      if (crng.chance(spec.shared_reference_rate)) {
        refs.insert("X" + std::to_string(paper.block) + "-" + std::to_string(crng.skewed(30)));
      } else {
        refs.insert(prefix + std::to_string(crng.skewed(40)));
      }
    }
    paper.json["references"] = refs;
  }

  std::string out;
  for (const auto& p : papers) {
    out += p.json.dump();
    out += '\n';
  }
  result.papers = std::move(out);
  std::string mout;
  for (const auto& m : mentions) {
    mout += m.dump();
    mout += '\n';
  }
  result.mentions = std::move(mout);
  return result;
}

void write_generated(const GeneratedCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : {std::pair{"papers.jsonl", &corpus.papers}, {"mentions.jsonl", &corpus.mentions}}) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + (dir / name).string());
    out << *content;
    if (!out) throw ValidationError("failed writing " + (dir / name).string());
  }
}

}  // namespace namedis
