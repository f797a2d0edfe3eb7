#include "namedis/features.hpp"

#include <cmath>
#include <map>

#include "namedis/text.hpp"

namespace namedis {
namespace {

void sort_unique(IdSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

std::string address_key(const Address& a) { return a.country + '\x1f' + a.city; }

int tier(const std::array<int, 4>& exact, int above, int count) {
  if (count <= 0) return 0;
  return count > 4 ? above : exact[static_cast<std::size_t>(count - 1)];
}

}  // namespace

std::uint32_t Interner::intern(std::string_view s) {
  auto it = ids_.find(std::string(s));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(strings_.size());
  strings_.emplace_back(s);
  ids_.emplace(strings_.back(), id);
  return id;
}

std::uint32_t Interner::find(std::string_view s) const {
  auto it = ids_.find(std::string(s));
  return it == ids_.end() ? kNoId : it->second;
}

std::string_view field_name(Field field) {
  switch (field) {
    case Field::kTitle: return "title";
    case Field::kAbstract: return "abstract";
    case Field::kAffiliation: return "affiliation";
    case Field::kSubject: return "subject_category";
    case Field::kKeyword: return "keyword";
    case Field::kCoauthor: return "coauthor";
    case Field::kCitedAuthor: return "cited_author";
    case Field::kEmail: return "email";
  }
  return "?";
}

BlockFeatures build_block_features(const Corpus& corpus, std::span<const std::uint32_t> members,
                                   const GeneralNameList& names) {
  BlockFeatures block;
  auto& pool = block.strings;
  block.mentions.reserve(members.size());
  std::unordered_map<std::string, bool> general_cache;
  for (std::uint32_t m : members) {
    const AuthorMention& mention = corpus.mentions()[m];
    const PaperRecord& paper = corpus.paper_of(m);
    MentionFeatures f;
    f.mention = m;
    f.paper_id = pool.intern(paper.paper_id);
    if (mention.email) f.email = pool.intern(*mention.email);
    if (std::string first = normalize_first_name(mention.first_name); !first.empty()) {
      f.first_name = pool.intern(first);
      auto [it, inserted] = general_cache.try_emplace(first, false);
      if (inserted) it->second = names.is_general(first);
      f.general_first_name = it->second;
    }
    for (const auto& initial : mention.initials) f.initials.push_back(pool.intern(initial));
    if (!paper.journal.empty()) f.journal = pool.intern(paper.journal);
    for (const auto& key : corpus.coauthors(m)) f.coauthors.push_back(pool.intern(key));
    for (const auto& ref : paper.references) f.references.push_back(pool.intern(ref));
    for (const auto& citer : corpus.citations().citers(paper.paper_id)) {
      f.citers.push_back(pool.intern(citer));
    }
    for (const auto& s : paper.subject_categories) f.subjects.push_back(pool.intern(s));
    for (const auto& g : paper.grant_numbers) f.grants.push_back(pool.intern(g));
    for (const auto& a : mention.author_addresses) f.author_addresses.push_back(pool.intern(address_key(a)));
    for (const auto& a : paper.pub_addresses) f.pub_addresses.push_back(pool.intern(address_key(a)));
    for (const auto& t : paper.title_tokens) f.title_terms.push_back(pool.intern(t));
    for (const auto& t : tokenize(paper.journal)) f.journal_terms.push_back(pool.intern(t));

    auto& fields = f.fields;
    fields[static_cast<std::size_t>(Field::kTitle)] = f.title_terms;
    for (const auto& t : paper.abstract_tokens) {
      fields[static_cast<std::size_t>(Field::kAbstract)].push_back(pool.intern(t));
    }
    fields[static_cast<std::size_t>(Field::kAffiliation)] = f.author_addresses;
    fields[static_cast<std::size_t>(Field::kSubject)] = f.subjects;
    for (const auto& k : paper.keywords) {
      fields[static_cast<std::size_t>(Field::kKeyword)].push_back(pool.intern(k));
    }
    fields[static_cast<std::size_t>(Field::kCoauthor)] = f.coauthors;
    for (const auto& ref : paper.references) {
      if (auto cited = corpus.paper_index(ref)) {
        for (std::uint32_t other : corpus.mentions_on_paper(*cited)) {
          fields[static_cast<std::size_t>(Field::kCitedAuthor)].push_back(
              pool.intern(corpus.canonical_key(other)));
        }
      }
    }
    if (f.email != kNoId) fields[static_cast<std::size_t>(Field::kEmail)].push_back(f.email);

    for (IdSet* set : {&f.coauthors, &f.references, &f.citers, &f.subjects, &f.grants,
                       &f.author_addresses, &f.pub_addresses}) {
      sort_unique(*set);
    }
    std::sort(f.title_terms.begin(), f.title_terms.end());
    std::sort(f.journal_terms.begin(), f.journal_terms.end());
    for (auto& set : fields) sort_unique(set);
    block.mentions.push_back(std::move(f));
  }
  return block;
}

// ---------------------------------------------------------------------------

RuleScoreTable RuleScoreTable::from_config(const FlatConfig& config) {
  RuleScoreTable t;
  auto read = [&](const char* name, int& slot) {
    const std::string key = std::string("score.") + name;
    if (config.has(key)) slot = static_cast<int>(config.integer(key));
  };
  read("email_exact", t.email_exact);
  read("initials_two", t.initials_two);
  read("initials_more", t.initials_more);
  read("initials_conflict", t.initials_conflict);
  read("first_name_general", t.first_name_general);
  read("first_name_nongeneral", t.first_name_nongeneral);
  read("author_address", t.author_address);
  read("coauthor_1", t.coauthor_1);
  read("coauthor_2", t.coauthor_2);
  read("coauthor_gt2", t.coauthor_gt2);
  read("grant", t.grant);
  read("pub_address", t.pub_address);
  read("subject_category", t.subject_category);
  read("journal", t.journal);
  read("self_citation", t.self_citation);
  read("coupling_1", t.coupling[0]);
  read("coupling_2", t.coupling[1]);
  read("coupling_3", t.coupling[2]);
  read("coupling_4", t.coupling[3]);
  read("coupling_gt4", t.coupling_gt4);
  read("cocitation_1", t.cocitation[0]);
  read("cocitation_2", t.cocitation[1]);
  read("cocitation_3", t.cocitation[2]);
  read("cocitation_4", t.cocitation[3]);
  read("cocitation_gt4", t.cocitation_gt4);
  return t;
}

void RuleScoreTable::to_config(FlatConfig& config) const {
  auto put = [&](const char* name, int v) { config.set(std::string("score.") + name, double(v)); };
  put("email_exact", email_exact);
  put("initials_two", initials_two);
  put("initials_more", initials_more);
  put("initials_conflict", initials_conflict);
  put("first_name_general", first_name_general);
  put("first_name_nongeneral", first_name_nongeneral);
  put("author_address", author_address);
  put("coauthor_1", coauthor_1);
  put("coauthor_2", coauthor_2);
  put("coauthor_gt2", coauthor_gt2);
  put("grant", grant);
  put("pub_address", pub_address);
  put("subject_category", subject_category);
  put("journal", journal);
  put("self_citation", self_citation);
  put("coupling_1", coupling[0]);
  put("coupling_2", coupling[1]);
  put("coupling_3", coupling[2]);
  put("coupling_4", coupling[3]);
  put("coupling_gt4", coupling_gt4);
  put("cocitation_1", cocitation[0]);
  put("cocitation_2", cocitation[1]);
  put("cocitation_3", cocitation[2]);
  put("cocitation_4", cocitation[3]);
  put("cocitation_gt4", cocitation_gt4);
}

RuleMatch match_rules(const MentionFeatures& a, const MentionFeatures& b) {
  RuleMatch r;
  r.email = a.email != kNoId && a.email == b.email;

  if (std::max(a.initials.size(), b.initials.size()) > 1) {
    const std::size_t shared = std::min(a.initials.size(), b.initials.size());
    bool conflict = false;
    for (std::size_t i = 0; i < shared; ++i) conflict |= a.initials[i] != b.initials[i];
    if (conflict) {
      r.initials = -1;
    } else if (shared == 2) {
      r.initials = 2;
    } else if (shared > 2) {
      r.initials = 3;
    }
  }

  if (a.first_name != kNoId && a.first_name == b.first_name) {
    r.first_name = a.general_first_name ? 1 : 2;
  }
  r.author_address = intersection_size(a.author_addresses, b.author_addresses) > 0;
  r.coauthors = static_cast<int>(std::min<std::size_t>(3, intersection_size(a.coauthors, b.coauthors)));
  r.grant = intersection_size(a.grants, b.grants) > 0;
  r.pub_address = intersection_size(a.pub_addresses, b.pub_addresses) > 0;
  r.subject = intersection_size(a.subjects, b.subjects) > 0;
  r.journal = a.journal != kNoId && a.journal == b.journal;
  r.self_citation = std::binary_search(b.references.begin(), b.references.end(), a.paper_id) ||
                    std::binary_search(a.references.begin(), a.references.end(), b.paper_id);
  r.coupling = static_cast<int>(std::min<std::size_t>(5, intersection_size(a.references, b.references)));
  r.cocitation = static_cast<int>(std::min<std::size_t>(5, intersection_size(a.citers, b.citers)));
  return r;
}

int score_match(const RuleMatch& m, const RuleScoreTable& t) {
  int s = 0;
  if (m.email) s += t.email_exact;
  if (m.initials == 2) s += t.initials_two;
  if (m.initials == 3) s += t.initials_more;
  if (m.initials == -1) s += t.initials_conflict;
  if (m.first_name == 1) s += t.first_name_general;
  if (m.first_name == 2) s += t.first_name_nongeneral;
  if (m.author_address) s += t.author_address;
  if (m.coauthors == 1) s += t.coauthor_1;
  if (m.coauthors == 2) s += t.coauthor_2;
  if (m.coauthors >= 3) s += t.coauthor_gt2;
  if (m.grant) s += t.grant;
  if (m.pub_address) s += t.pub_address;
  if (m.subject) s += t.subject_category;
  if (m.journal) s += t.journal;
  if (m.self_citation) s += t.self_citation;
  s += tier(t.coupling, t.coupling_gt4, m.coupling);
  s += tier(t.cocitation, t.cocitation_gt4, m.cocitation);
  return s;
}

int rule_score(const Corpus& corpus, std::size_t m1, std::size_t m2, const RuleScoreTable& table,
               const GeneralNameList& names) {
  const std::uint32_t members[2] = {static_cast<std::uint32_t>(m1), static_cast<std::uint32_t>(m2)};
  BlockFeatures f = build_block_features(corpus, members, names);
  return rule_score(f.mentions[0], f.mentions[1], table);
}

GeneralNameList GeneralNameList::build(const Corpus& corpus, std::size_t min_surnames) {
  std::map<std::string, std::unordered_set<std::string>> surnames;
  for (const auto& m : corpus.mentions()) {
    std::string first = normalize_first_name(m.first_name);
    if (first.empty()) continue;
    surnames[std::move(first)].insert(normalize_text(m.surname));
  }
  std::unordered_set<std::string> general;
  for (auto& [name, set] : surnames) {
    if (set.size() >= min_surnames) general.insert(name);
  }
  return GeneralNameList(std::move(general));
}

bool GeneralNameList::is_general(std::string_view first_name) const {
  if (names_.empty()) return false;
  return names_.contains(normalize_first_name(first_name));
}

std::vector<std::string> GeneralNameList::sorted() const {
  std::vector<std::string> out(names_.begin(), names_.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

IdfTable::IdfTable(std::span<const std::vector<std::string>> documents) : documents_(documents.size()) {
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    std::unordered_set<std::string_view> seen(doc.begin(), doc.end());
    for (auto term : seen) ++df[std::string(term)];
  }
  for (auto& [term, count] : df) {
    idf_[term] = std::log(static_cast<double>(documents_) / static_cast<double>(count));
  }
}

double IdfTable::idf(const std::string& term) const {
  auto it = idf_.find(term);
  return it == idf_.end() ? 0.0 : it->second;
}

double tfidf_cosine(std::span<const std::string> doc_a, std::span<const std::string> doc_b,
                    const IdfTable& idf) {
  std::map<std::string, double> va;
  std::map<std::string, double> vb;
  for (const auto& t : doc_a) va[t] += 1.0;
  for (const auto& t : doc_b) vb[t] += 1.0;
  double na = 0;
  double nb = 0;
  double dot = 0;
  for (auto& [t, tf] : va) {
    tf *= idf.idf(t);
    na += tf * tf;
  }
  for (auto& [t, tf] : vb) {
    tf *= idf.idf(t);
    nb += tf * tf;
    if (auto it = va.find(t); it != va.end()) dot += it->second * tf;
  }
  if (na <= 0 || nb <= 0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

// ---------------------------------------------------------------------------

FieldWeighting::FieldWeighting(const BlockFeatures& block) {
  const std::size_t vocab = block.strings.size();
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    auto& df = df_[f];
    df.assign(vocab, 0);
    std::size_t carriers = 0;
    for (const auto& m : block.mentions) {
      if (m.fields[f].empty()) continue;
      ++carriers;
      for (auto t : m.fields[f]) ++df[t];
    }
    carriers_[f] = carriers;
    auto& w = weights_[f];
    w.assign(vocab, 0.0);
    for (std::size_t t = 0; t < vocab; ++t) {
      if (df[t] > 0) w[t] = std::log(static_cast<double>(carriers) / static_cast<double>(df[t]));
    }
  }
}

FieldBundle FieldBundle::of(const MentionFeatures& mention, const FieldWeighting& w) {
  FieldBundle b;
  b.tokens = mention.fields;
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    const auto& weights = w.weights(static_cast<Field>(f));
    double total = 0;
    for (auto t : b.tokens[f]) total += weights[t];
    b.total[f] = total;
  }
  return b;
}

void FieldBundle::absorb(const FieldBundle& other, const FieldWeighting& w) {
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    if (other.tokens[f].empty()) continue;
    IdSet merged;
    merged.reserve(tokens[f].size() + other.tokens[f].size());
    std::set_union(tokens[f].begin(), tokens[f].end(), other.tokens[f].begin(),
                   other.tokens[f].end(), std::back_inserter(merged));
    tokens[f] = std::move(merged);
    const auto& weights = w.weights(static_cast<Field>(f));
    double sum = 0;
    for (auto t : tokens[f]) sum += weights[t];
    total[f] = sum;
  }
}

double specificity_score(const FieldBundle& a, const FieldBundle& b, const FieldWeighting& w) {
  double sum = 0;
  int present = 0;
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    const auto& ta = a.tokens[f];
    const auto& tb = b.tokens[f];
    if (ta.empty() && tb.empty()) continue;
    ++present;
    const double denom = std::min(a.total[f], b.total[f]);
    if (denom <= 0) continue;
    const auto& weights = w.weights(static_cast<Field>(f));
    double shared = 0;
    auto i = ta.begin();
    auto j = tb.begin();
    while (i != ta.end() && j != tb.end()) {
      if (*i < *j) {
        ++i;
      } else if (*j < *i) {
        ++j;
      } else {
        shared += weights[*i];
        ++i;
        ++j;
      }
    }
    sum += std::min(1.0, shared / denom);
  }
  return present == 0 ? 0.0 : sum / present;
}

}  // namespace namedis
