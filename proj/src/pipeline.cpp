#include "namedis/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "namedis/errors.hpp"
#include "namedis/parallel.hpp"

namespace namedis {
namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

Workspace make_workspace(Corpus corpus, std::size_t min_gold_authors) {
  Workspace ws;
  ws.corpus = std::move(corpus);
  ws.corpus_hash = corpus_hash(ws.corpus);
  ws.min_gold_authors = min_gold_authors;
  auto blocks = build_blocks(ws.corpus);
  if (min_gold_authors == 0) {
    ws.blocks = std::move(blocks);
  } else {
    auto filtered = filter_blocks(std::move(blocks), ws.corpus, min_gold_authors);
    ws.blocks = std::move(filtered.kept);
    ws.dropped = std::move(filtered.dropped);
    ws.dropped_mentions = filtered.dropped_mentions;
  }
  spdlog::info("corpus {}: {} papers, {} mentions, {} blocks kept, {} dropped ({} mentions)", ws.corpus_hash,
               ws.corpus.papers().size(), ws.corpus.mentions().size(), ws.blocks.size(), ws.dropped.size(),
               ws.dropped_mentions);
  return ws;
}

std::vector<BlockResult> disambiguate_blocks(const Workspace& ws, Algorithm algorithm, const FlatConfig& params,
                                             unsigned jobs) {
  const AlgorithmParams base = AlgorithmParams::from_config(params);
  GeneralNameList names;
  if (algorithm == Algorithm::kCaron) names = GeneralNameList::build(ws.corpus, base.caron.general_name_min_surnames);
  std::vector<BlockResult> results(ws.blocks.size());
  parallel_for(ws.blocks.size(), jobs, [&](std::size_t b) {
    const Block& block = ws.blocks[b];
    const AlgorithmParams p = AlgorithmParams::for_block(params, block.key);
    results[b] = run_algorithm(algorithm, block, ws.corpus, p, names);
  });
  return results;
}

std::vector<BlockEvaluation> evaluate_blocks(const Workspace& ws, std::span<const BlockResult> results) {
  if (results.size() != ws.blocks.size()) throw InvariantError("evaluate_blocks: one result per block expected");
  std::vector<BlockEvaluation> out;
  out.reserve(results.size());
  for (std::size_t b = 0; b < results.size(); ++b) {
    out.push_back(evaluate_block(ws.blocks[b], results[b].clustering, ws.corpus));
  }
  return out;
}

std::string clusters_csv(const Block& block, const Corpus& corpus, const Clustering& clustering) {
  std::string out = "mention_id,cluster_id\n";
  for (std::size_t i = 0; i < block.size(); ++i) {
    out += csv_field(corpus.mentions()[block.members[i]].mention_id);
    out += ',';
    out += std::to_string(clustering.label(i));
    out += '\n';
  }
  return out;
}

Clustering read_clusters_csv(const std::filesystem::path& path, const Block& block, const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::unordered_map<std::string_view, std::size_t> position;
  for (std::size_t i = 0; i < block.size(); ++i) position[corpus.mentions()[block.members[i]].mention_id] = i;
  std::vector<std::uint32_t> labels(block.size());
  std::vector<char> seen(block.size(), 0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 || line.empty()) continue;
    const auto comma = line.rfind(',');
    auto fail = [&](const std::string& what) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    if (comma == std::string::npos) fail("expected mention_id,cluster_id");
    std::string id = line.substr(0, comma);
    if (id.size() >= 2 && id.front() == '"' && id.back() == '"') {
      std::string unq;
      for (std::size_t k = 1; k + 1 < id.size(); ++k) {
        if (id[k] == '"' && k + 2 < id.size() && id[k + 1] == '"') ++k;
        unq += id[k];
      }
      id = unq;
    }
    auto it = position.find(id);
    if (it == position.end()) fail("mention '" + id + "' is not in block '" + block.key + "'");
    if (seen[it->second]) fail("mention '" + id + "' listed twice");
    seen[it->second] = 1;
    try {
      labels[it->second] = static_cast<std::uint32_t>(std::stoul(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail("bad cluster id");
    }
  }
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (!seen[i]) {
      throw ValidationError(path.string() + ": mention '" + corpus.mentions()[block.members[i]].mention_id +
                            "' of block '" + block.key + "' is missing");
    }
  }
  return Clustering::from_labels(labels);
}

std::string trace_csv(const MergeTrace& trace) {
  std::string out = "step,cluster_a,cluster_b,similarity,level\n";
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    out += std::to_string(k) + ',' + std::to_string(s.cluster_a) + ',' + std::to_string(s.cluster_b) + ',' +
           format_number(s.similarity) + ',' + format_number(s.level) + '\n';
  }
  return out;
}

std::string report_csv(std::span<const NamedReport> rows) {
  std::string out = "approach,p_pair,r_pair,f1_pair,p_best,r_best,f1_best\n";
  for (const auto& [name, r] : rows) {
    out += name;
    for (double v : {r.p_pair, r.r_pair, r.f1_pair, r.p_best, r.r_best, r.f1_best}) out += ',' + fixed6(v);
    out += '\n';
  }
  return out;
}

std::string block_reports_csv(std::string_view approach, std::span<const EvalReport> reports, bool header) {
  std::string out;
  if (header) {
    out = "approach,block,block_size,n_mentions,n_gold_authors,n_clusters,p_pair,r_pair,f1_pair,p_best,r_best,f1_best\n";
  }
  for (const auto& r : reports) {
    out += std::string(approach) + ',' + csv_field(r.scope) + ',' + std::to_string(r.block_size) + ',' +
           std::to_string(r.n_mentions) + ',' + std::to_string(r.n_gold_authors) + ',' + std::to_string(r.n_clusters);
    for (double v : {r.p_pair, r.r_pair, r.f1_pair, r.p_best, r.r_best, r.f1_best}) out += ',' + fixed6(v);
    out += '\n';
  }
  return out;
}

std::string size_curve_csv(std::string_view approach, std::span<const SizeCurveRow> rows, bool header) {
  std::string out;
  if (header) out = "approach,block_size,mean_f1_pair,mean_f1_best,n_blocks\n";
  for (const auto& r : rows) {
    out += std::string(approach) + ',' + std::to_string(r.block_size) + ',' + fixed6(r.mean_f1_pair) + ',' +
           fixed6(r.mean_f1_best) + ',' + std::to_string(r.n_blocks) + '\n';
  }
  return out;
}

std::string manifest_json(std::string_view subcommand, std::string_view corpus_hash, std::string_view algorithm,
                          const FlatConfig& params) {
  nlohmann::ordered_json m;
  m["subcommand"] = subcommand;
  m["corpus_hash"] = corpus_hash;
  m["algorithm"] = algorithm;
  m["params"] = params.dump();
  m["tool_version"] = kToolVersion;
  m["timestamp"] = utc_timestamp();
  return m.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
  if (!out) throw ValidationError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_run(const std::filesystem::path& dir, const Workspace& ws, Algorithm algorithm, const FlatConfig& params,
               std::span<const BlockResult> results) {
  std::string index = "block,stem,size,clusters\n";
  for (std::size_t b = 0; b < ws.blocks.size(); ++b) {
    const Block& block = ws.blocks[b];
    const std::string stem = block_file_stem(block.key);
    write_text(dir / "clusters" / (stem + ".csv"), clusters_csv(block, ws.corpus, results[b].clustering));
    if (algorithm == Algorithm::kBackes) write_text(dir / "traces" / (stem + ".csv"), trace_csv(results[b].trace));
    index += csv_field(block.key) + ',' + stem + ',' + std::to_string(block.size()) + ',' +
             std::to_string(results[b].clustering.cluster_count()) + '\n';
  }
  write_text(dir / "index.csv", index);
  write_text(dir / "params.toml", params.dump());
  write_text(dir / "manifest.json", manifest_json("disambiguate", ws.corpus_hash, algorithm_name(algorithm), params));
}

PipelineOutcome run_pipeline(Corpus corpus, const PipelineOptions& options, const std::filesystem::path& out) {
  PipelineOutcome outcome;
  outcome.workspace = make_workspace(std::move(corpus), options.min_gold_authors);
  const Workspace& ws = outcome.workspace;
  if (!out.empty()) {
    std::ostringstream papers, mentions;
    write_papers(ws.corpus, papers);
    write_mentions(ws.corpus, mentions);
    write_text(out / "corpus" / "papers.jsonl", papers.str());
    write_text(out / "corpus" / "mentions.jsonl", mentions.str());
  }
  std::vector<NamedReport> rows;
  std::string blocks_csv, curve_csv;
  for (Algorithm alg : kAllAlgorithms) {
    ApproachOutcome a;
    a.algorithm = alg;
    const auto t0 = std::chrono::steady_clock::now();
    if (alg == Algorithm::kBaseline) {
      a.params = AlgorithmParams{}.to_config(alg);
    } else {
      const AlgorithmParams base;
      GeneralNameList names;
      if (alg == Algorithm::kCaron) names = GeneralNameList::build(ws.corpus, base.caron.general_name_min_surnames);
      const TuningInput input{ws.corpus, ws.blocks, alg, base, names, options.jobs};
      auto it = options.grids.find(alg);
      const CandidateGrid grid = it != options.grids.end() ? it->second : CandidateGrid::defaults(alg);
      a.fit = fit(input, grid, options.objective, FitMode::kGlobal);
      a.params = a.fit->to_config(base);
      if (!out.empty()) {
        const auto dir = out / "fits" / std::string(algorithm_name(alg));
        write_text(dir / "params.toml", a.params.dump());
        write_text(dir / "scores.csv", a.fit->table_csv());
        write_text(dir / "manifest.json", manifest_json("fit", ws.corpus_hash, algorithm_name(alg), a.params));
      }
    }
    a.results = disambiguate_blocks(ws, alg, a.params, options.jobs);
    const auto evals = evaluate_blocks(ws, a.results);
    for (const auto& e : evals) a.block_reports.push_back(EvalReport::from_counts(e.key, e.block_size, e.counts));
    a.overall = aggregate(evals);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    spdlog::info("{}: f1_pair {:.4f} f1_best {:.4f} ({:.1f}s)", algorithm_name(alg), a.overall.f1_pair,
                 a.overall.f1_best, seconds);
    if (!out.empty()) {
      write_run(out / "runs" / std::string(algorithm_name(alg)), ws, alg, a.params, a.results);
    }
    rows.push_back({std::string(algorithm_name(alg)), a.overall});
    blocks_csv += block_reports_csv(algorithm_name(alg), a.block_reports, blocks_csv.empty());
    curve_csv += size_curve_csv(algorithm_name(alg), quality_by_size(a.block_reports), curve_csv.empty());
    outcome.approaches.push_back(std::move(a));
  }
  if (!out.empty()) {
    write_text(out / "report.csv", report_csv(rows));
    write_text(out / "blocks.csv", blocks_csv);
    write_text(out / "size_curve.csv", curve_csv);
    FlatConfig snapshot;
    snapshot.set("objective", std::string(objective_name(options.objective)));
    snapshot.set("min_gold_authors", static_cast<double>(options.min_gold_authors));
    write_text(out / "manifest.json", manifest_json("pipeline", ws.corpus_hash, "all", snapshot));
  }
  return outcome;
}

}  // namespace namedis
