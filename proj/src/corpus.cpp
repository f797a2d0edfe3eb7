#include "namedis/corpus.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "namedis/errors.hpp"
#include "namedis/text.hpp"

namespace namedis {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void sort_unique(StringSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

void sort_unique(std::vector<Address>& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

// Context for error messages and once-per-key warnings.
struct LineContext {
  std::string_view source;
  std::size_t line;
  std::set<std::string>* warned;

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + what);
  }
};

std::string get_string(const json& obj, const char* key, const LineContext& ctx, bool required) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) ctx.fail(std::string("missing required key '") + key + "'");
    return {};
  }
  if (!it->is_string()) ctx.fail(std::string("key '") + key + "' must be a string");
  return it->get<std::string>();
}

StringSet get_strings(const json& obj, const char* key, const LineContext& ctx) {
  StringSet out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) ctx.fail(std::string("key '") + key + "' must be an array");
  for (const auto& item : *it) {
    if (!item.is_string()) ctx.fail(std::string("key '") + key + "' must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<Address> get_addresses(const json& obj, const char* key, const LineContext& ctx) {
  std::vector<Address> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) ctx.fail(std::string("key '") + key + "' must be an array");
  for (const auto& item : *it) {
    if (!item.is_object()) ctx.fail(std::string("key '") + key + "' must hold {country, city} objects");
    Address a{normalize_text(get_string(item, "country", ctx, false)),
              normalize_text(get_string(item, "city", ctx, false))};
    if (!a.country.empty() || !a.city.empty()) out.push_back(std::move(a));
  }
  sort_unique(out);
  return out;
}

void warn_unknown(const json& obj, std::initializer_list<std::string_view> known,
                  const LineContext& ctx) {
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) != known.end()) continue;
    if (ctx.warned->insert(item.key()).second) {
      spdlog::warn("{}:{}: ignoring unknown key '{}'", ctx.source, ctx.line, item.key());
    }
  }
}

json parse_line(const std::string& line, const LineContext& ctx) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    ctx.fail(std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) ctx.fail("expected a JSON object");
  return obj;
}

PaperRecord parse_paper(const json& obj, const LineContext& ctx) {
  warn_unknown(obj,
               {"paper_id", "title", "abstract", "journal", "year", "subject_categories",
                "keywords", "references", "grant_numbers", "pub_addresses"},
               ctx);
  PaperRecord p;
  p.paper_id = get_string(obj, "paper_id", ctx, true);
  if (p.paper_id.empty()) ctx.fail("empty paper_id");
  p.title = get_string(obj, "title", ctx, false);
  p.abstract_text = get_string(obj, "abstract", ctx, false);
  p.title_tokens = tokenize(p.title);
  p.abstract_tokens = tokenize(p.abstract_text);
  p.journal = normalize_text(get_string(obj, "journal", ctx, false));
  if (auto it = obj.find("year"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) ctx.fail("key 'year' must be an integer");
    p.year = it->get<int>();
  }
  for (auto& s : get_strings(obj, "subject_categories", ctx)) {
    if (auto n = normalize_text(s); !n.empty()) p.subject_categories.push_back(std::move(n));
  }
  for (auto& s : get_strings(obj, "keywords", ctx)) {
    if (auto n = normalize_text(s); !n.empty()) p.keywords.push_back(std::move(n));
  }
  for (auto& s : get_strings(obj, "references", ctx)) {
    if (s.empty()) continue;
    if (s == p.paper_id) {
      spdlog::warn("{}:{}: paper '{}' lists itself as a reference; dropped", ctx.source,
                   ctx.line, p.paper_id);
      continue;
    }
    p.references.push_back(std::move(s));
  }
  for (auto& s : get_strings(obj, "grant_numbers", ctx)) {
    if (!s.empty()) p.grant_numbers.push_back(std::move(s));
  }
  p.pub_addresses = get_addresses(obj, "pub_addresses", ctx);
  sort_unique(p.subject_categories);
  sort_unique(p.keywords);
  sort_unique(p.references);
  sort_unique(p.grant_numbers);
  return p;
}

AuthorMention parse_mention(const json& obj, const LineContext& ctx) {
  warn_unknown(obj,
               {"mention_id", "paper_id", "surname", "first_name", "initials", "email",
                "author_addresses", "gold_author_id"},
               ctx);
  AuthorMention m;
  m.mention_id = get_string(obj, "mention_id", ctx, true);
  if (m.mention_id.empty()) ctx.fail("empty mention_id");
  m.paper_id = get_string(obj, "paper_id", ctx, true);
  m.surname = get_string(obj, "surname", ctx, true);
  m.first_name = get_string(obj, "first_name", ctx, false);
  for (const auto& raw : get_strings(obj, "initials", ctx)) {
    std::string initial = first_initial(raw);
    if (initial.empty()) ctx.fail("initial '" + raw + "' has no letter");
    m.initials.push_back(std::move(initial));
  }
  if (!m.first_name.empty() && m.initials.empty()) {
    ctx.fail("mention '" + m.mention_id + "' has a first name but no initials");
  }
  if (auto email = normalize_text(get_string(obj, "email", ctx, false)); !email.empty()) {
    m.email = std::move(email);
  }
  m.author_addresses = get_addresses(obj, "author_addresses", ctx);
  if (auto gold = get_string(obj, "gold_author_id", ctx, false); !gold.empty()) {
    m.gold_author_id = std::move(gold);
  }
  return m;
}

template <class Fn>
void for_each_line(std::istream& in, std::string_view source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(line, line_no);
  }
  (void)source;
}

ordered_json address_list(const std::vector<Address>& list) {
  ordered_json out = ordered_json::array();
  for (const auto& a : list) out.push_back(ordered_json{{"country", a.country}, {"city", a.city}});
  return out;
}

}  // namespace

void CitationIndex::build(std::span<const PaperRecord> papers) {
  citers_.clear();
  for (const auto& paper : papers) {
    for (const auto& ref : paper.references) citers_[ref].push_back(paper.paper_id);
  }
  for (auto& [_, list] : citers_) sort_unique(list);
}

const StringSet& CitationIndex::citers(const std::string& key) const {
  static const StringSet kEmpty;
  auto it = citers_.find(key);
  return it == citers_.end() ? kEmpty : it->second;
}

std::string mention_canonical_key(const AuthorMention& m) {
  std::string_view initial_source = m.first_name;
  if (normalize_text(m.first_name).empty()) {
    initial_source = m.initials.empty() ? std::string_view{} : std::string_view(m.initials.front());
  }
  return canonicalize(m.surname, initial_source, m.mention_id);
}

Corpus::Corpus(std::vector<PaperRecord> papers, std::vector<AuthorMention> mentions)
    : papers_(std::move(papers)), mentions_(std::move(mentions)) {
  std::sort(papers_.begin(), papers_.end(),
            [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; });
  std::sort(mentions_.begin(), mentions_.end(),
            [](const auto& a, const auto& b) { return a.mention_id < b.mention_id; });

  paper_by_id_.reserve(papers_.size());
  for (std::size_t i = 0; i < papers_.size(); ++i) {
    if (!paper_by_id_.emplace(papers_[i].paper_id, i).second) {
      throw ValidationError("duplicate paper_id '" + papers_[i].paper_id + "'");
    }
  }

  std::vector<std::string> dangling;
  mention_by_id_.reserve(mentions_.size());
  mention_paper_.resize(mentions_.size());
  keys_.resize(mentions_.size());
  for (std::size_t i = 0; i < mentions_.size(); ++i) {
    const auto& m = mentions_[i];
    if (!mention_by_id_.emplace(m.mention_id, i).second) {
      throw ValidationError("duplicate mention_id '" + m.mention_id + "'");
    }
    auto it = paper_by_id_.find(m.paper_id);
    if (it == paper_by_id_.end()) {
      dangling.push_back(m.mention_id);
    } else {
      mention_paper_[i] = it->second;
    }
    keys_[i] = mention_canonical_key(m);
  }
  if (!dangling.empty()) {
    std::string msg = "mentions reference unknown papers:";
    for (const auto& id : dangling) msg += " " + id;
    throw ValidationError(msg);
  }

  // CSR layout of mentions per paper.
  paper_mentions_offsets_.assign(papers_.size() + 1, 0);
  for (std::size_t p : mention_paper_) ++paper_mentions_offsets_[p + 1];
  for (std::size_t p = 0; p < papers_.size(); ++p) {
    paper_mentions_offsets_[p + 1] += paper_mentions_offsets_[p];
  }
  paper_mentions_.resize(mentions_.size());
  std::vector<std::uint32_t> fill(paper_mentions_offsets_.begin(), paper_mentions_offsets_.end() - 1);
  for (std::size_t i = 0; i < mentions_.size(); ++i) {
    paper_mentions_[fill[mention_paper_[i]]++] = static_cast<std::uint32_t>(i);
  }

  coauthors_.resize(mentions_.size());
  for (std::size_t i = 0; i < mentions_.size(); ++i) {
    auto& set = coauthors_[i];
    for (std::uint32_t other : mentions_on_paper(mention_paper_[i])) {
      if (other != i && keys_[other] != keys_[i]) set.push_back(keys_[other]);
    }
    sort_unique(set);
  }

  citations_.build(papers_);
}

std::optional<std::size_t> Corpus::paper_index(std::string_view paper_id) const {
  auto it = paper_by_id_.find(std::string(paper_id));
  if (it == paper_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Corpus::mention_index(std::string_view mention_id) const {
  auto it = mention_by_id_.find(std::string(mention_id));
  if (it == mention_by_id_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::uint32_t> Corpus::mentions_on_paper(std::size_t paper) const {
  return std::span<const std::uint32_t>(paper_mentions_).subspan(
      paper_mentions_offsets_[paper], paper_mentions_offsets_[paper + 1] - paper_mentions_offsets_[paper]);
}

Corpus read_corpus(std::istream& papers_in, std::istream& mentions_in,
                   std::string_view papers_name, std::string_view mentions_name) {
  std::set<std::string> warned_papers;
  std::set<std::string> warned_mentions;
  std::vector<PaperRecord> papers;
  std::unordered_map<std::string, std::size_t> first_line;
  for_each_line(papers_in, papers_name, [&](const std::string& line, std::size_t no) {
    LineContext ctx{papers_name, no, &warned_papers};
    PaperRecord p = parse_paper(parse_line(line, ctx), ctx);
    if (auto [it, inserted] = first_line.emplace(p.paper_id, no); !inserted) {
      ctx.fail("duplicate paper_id '" + p.paper_id + "' (first seen on line " +
               std::to_string(it->second) + ")");
    }
    papers.push_back(std::move(p));
  });
  std::vector<AuthorMention> mentions;
  first_line.clear();
  for_each_line(mentions_in, mentions_name, [&](const std::string& line, std::size_t no) {
    LineContext ctx{mentions_name, no, &warned_mentions};
    AuthorMention m = parse_mention(parse_line(line, ctx), ctx);
    if (normalize_text(m.surname).empty()) ctx.fail("empty surname in mention '" + m.mention_id + "'");
    if (auto [it, inserted] = first_line.emplace(m.mention_id, no); !inserted) {
      ctx.fail("duplicate mention_id '" + m.mention_id + "' (first seen on line " +
               std::to_string(it->second) + ")");
    }
    mentions.push_back(std::move(m));
  });
  return Corpus(std::move(papers), std::move(mentions));
}

Corpus ingest_corpus(const std::filesystem::path& papers_path,
                     const std::filesystem::path& mentions_path) {
  std::ifstream papers(papers_path, std::ios::binary);
  if (!papers) throw ValidationError("cannot open " + papers_path.string());
  std::ifstream mentions(mentions_path, std::ios::binary);
  if (!mentions) throw ValidationError("cannot open " + mentions_path.string());
  return read_corpus(papers, mentions, papers_path.filename().string(),
                     mentions_path.filename().string());
}

Corpus ingest_corpus_dir(const std::filesystem::path& dir) {
  return ingest_corpus(dir / "papers.jsonl", dir / "mentions.jsonl");
}

void write_papers(const Corpus& corpus, std::ostream& out) {
  for (const auto& p : corpus.papers()) {
    ordered_json obj;
    obj["paper_id"] = p.paper_id;
    obj["title"] = p.title;
    obj["abstract"] = p.abstract_text;
    obj["journal"] = p.journal;
    obj["year"] = p.year;
    obj["subject_categories"] = p.subject_categories;
    obj["keywords"] = p.keywords;
    obj["references"] = p.references;
    obj["grant_numbers"] = p.grant_numbers;
    obj["pub_addresses"] = address_list(p.pub_addresses);
    out << obj.dump() << '\n';
  }
}

void write_mentions(const Corpus& corpus, std::ostream& out) {
  for (const auto& m : corpus.mentions()) {
    ordered_json obj;
    obj["mention_id"] = m.mention_id;
    obj["paper_id"] = m.paper_id;
    obj["surname"] = m.surname;
    obj["first_name"] = m.first_name;
    obj["initials"] = m.initials;
    obj["email"] = m.email ? ordered_json(*m.email) : ordered_json(nullptr);
    obj["author_addresses"] = address_list(m.author_addresses);
    obj["gold_author_id"] = m.gold_author_id ? ordered_json(*m.gold_author_id) : ordered_json(nullptr);
    out << obj.dump() << '\n';
  }
}

std::string corpus_hash(const Corpus& corpus) {
  std::ostringstream buffer;
  write_papers(corpus, buffer);
  buffer << '\x1e';
  write_mentions(corpus, buffer);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : buffer.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

}  // namespace namedis
