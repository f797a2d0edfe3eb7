#include "namedis/cli.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "namedis/errors.hpp"
#include "namedis/features.hpp"
#include "namedis/pipeline.hpp"

namespace namedis::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Globals {
  std::string out;
  unsigned jobs = 0;
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string log_level = "info";
};

struct CorpusArgs {
  std::string dir;
  std::string papers;
  std::string mentions;
  std::size_t min_authors = 5;

  void add(CLI::App* app, bool with_blocks = true) {
    app->add_option("--corpus", dir, "Directory holding papers.jsonl and mentions.jsonl");
    app->add_option("--papers", papers, "Papers file (JSON lines)");
    app->add_option("--mentions", mentions, "Mentions file (JSON lines)");
    if (with_blocks) {
      app->add_option("--min-authors", min_authors, "Drop blocks with fewer gold authors (0 keeps all)")
          ->capture_default_str();
    }
  }

  Corpus load() const {
    if (!papers.empty() || !mentions.empty()) {
      if (papers.empty() || mentions.empty()) throw ValidationError("--papers and --mentions go together");
      return ingest_corpus(papers, mentions);
    }
    if (dir.empty()) throw ValidationError("no corpus given (use --corpus DIR or --papers/--mentions)");
    return ingest_corpus_dir(dir);
  }
};

fs::path require_out(const Globals& g) {
  if (g.out.empty()) throw ValidationError("--out is required");
  return g.out;
}

FlatConfig load_params(const std::string& path, const Globals& g) {
  const std::string& p = path.empty() ? g.config : path;
  return p.empty() ? FlatConfig{} : FlatConfig::load(p);
}

std::string fit_json(const FitResult& r) {
  ordered_json j;
  j["algorithm"] = algorithm_name(r.algorithm);
  j["mode"] = fit_mode_name(r.mode);
  j["objective"] = objective_name(r.objective);
  j["value"] = r.objective_value;
  ordered_json chosen = ordered_json::object();
  for (std::size_t k = 0; k < r.names.size(); ++k) chosen[r.names[k]] = format_number(r.chosen[k]);
  j["global_choice"] = chosen;
  if (r.mode == FitMode::kClasses) {
    j["class_bounds"] = r.class_bounds;
    j["class_thresholds"] = r.class_thresholds;
  }
  if (r.mode == FitMode::kFlexible) j["blocks"] = r.per_block.size();
  j["evaluations"] = r.evaluations;
  const auto pair = pairwise_metrics(r.counts);
  const auto best = best_metrics(r.counts);
  j["f1_pair"] = pair.f1;
  j["f1_best"] = best.f1;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

void cmd_generate(const Globals& g, const std::string& spec_path) {
  const fs::path out = require_out(g);
  GenSpec spec = spec_path.empty() ? GenSpec{} : GenSpec::from_config(FlatConfig::load(spec_path));
  if (g.seed) spec.seed = *g.seed;
  const GeneratedCorpus gen = generate(spec);
  write_generated(gen, out);
  std::istringstream papers(gen.papers), mentions(gen.mentions);
  const Corpus corpus = read_corpus(papers, mentions);
  write_text(out / "spec.toml", spec.to_config().dump());
  write_text(out / "manifest.json", manifest_json("generate", corpus_hash(corpus), "", spec.to_config()));
  spdlog::info("generated {} papers, {} mentions ({} focal) in {} blocks", corpus.papers().size(),
               corpus.mentions().size(), gen.focal_mentions, gen.focal_blocks);
}

void cmd_ingest(const Globals& g, const CorpusArgs& c) {
  const Corpus corpus = c.load();
  ordered_json j;
  j["papers"] = corpus.papers().size();
  j["mentions"] = corpus.mentions().size();
  j["cited_keys"] = corpus.citations().size();
  j["corpus_hash"] = corpus_hash(corpus);
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!g.out.empty()) {
    write_text(fs::path(g.out) / "ingest.json", text);
    write_text(fs::path(g.out) / "manifest.json", manifest_json("ingest", corpus_hash(corpus), "", FlatConfig{}));
  }
}

void cmd_block(const Globals& g, const CorpusArgs& c) {
  const fs::path out = require_out(g);
  const Workspace ws = make_workspace(c.load(), c.min_authors);
  std::string blocks, sizes = "block,size,gold_authors,kept\n";
  for (const auto& b : ws.blocks) {
    ordered_json j;
    j["key"] = b.key;
    j["size"] = b.size();
    j["gold_authors"] = count_gold_authors(b, ws.corpus);
    j["empty_initial"] = b.empty_initial;
    j["mention_ids"] = b.mention_ids(ws.corpus);
    blocks += j.dump() + "\n";
  }
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& b : ws.blocks) {
    rows.emplace_back(b.key, std::to_string(b.size()) + ',' + std::to_string(count_gold_authors(b, ws.corpus)) + ",1");
  }
  for (const auto& d : ws.dropped) {
    rows.emplace_back(d.key, std::to_string(d.size) + ',' + std::to_string(d.gold_authors) + ",0");
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [key, rest] : rows) sizes += '"' + key + "\"," + rest + '\n';
  write_text(out / "blocks.jsonl", blocks);
  write_text(out / "block_sizes.csv", sizes);
  FlatConfig snapshot;
  snapshot.set("min_gold_authors", static_cast<double>(c.min_authors));
  write_text(out / "manifest.json", manifest_json("block", ws.corpus_hash, "", snapshot));
}

void cmd_disambiguate(const Globals& g, const CorpusArgs& c, const std::string& algorithm,
                      const std::string& params_path) {
  const fs::path out = require_out(g);
  const Algorithm alg = parse_algorithm(algorithm);
  FlatConfig params = load_params(params_path, g);
  AlgorithmParams::from_config(params);  // validate before any work
  const Workspace ws = make_workspace(c.load(), c.min_authors);
  const auto results = disambiguate_blocks(ws, alg, params, g.jobs);
  FlatConfig effective = params;
  const FlatConfig resolved = AlgorithmParams::from_config(params).to_config(alg);
  for (const auto& [k, v] : resolved.entries()) effective.set(k, v);
  write_run(out, ws, alg, effective, results);
}

void cmd_evaluate(const Globals& g, const CorpusArgs& c, const std::vector<std::string>& runs,
                  const std::string& mode_name) {
  const fs::path out = require_out(g);
  if (runs.empty()) throw ValidationError("evaluate needs at least one --clusters run directory");
  AggregateMode mode;
  if (mode_name == "pooled") {
    mode = AggregateMode::kPooled;
  } else if (mode_name == "macro") {
    mode = AggregateMode::kMacro;
  } else {
    throw ValidationError("unknown aggregation '" + mode_name + "' (expected pooled or macro)");
  }
  const Workspace ws = make_workspace(c.load(), c.min_authors);
  std::vector<NamedReport> rows;
  std::string blocks_csv, curve_csv;
  for (const auto& run : runs) {
    const fs::path dir(run);
    const auto manifest = ordered_json::parse(read_text(dir / "manifest.json"), nullptr, false);
    if (manifest.is_discarded() || !manifest.contains("algorithm")) {
      throw ValidationError(dir.string() + ": manifest.json is missing or malformed");
    }
    if (manifest.value("corpus_hash", "") != ws.corpus_hash) {
      throw ValidationError(dir.string() + ": run was made on corpus " + manifest.value("corpus_hash", "?") +
                            ", not " + ws.corpus_hash);
    }
    std::string name = manifest["algorithm"].get<std::string>();
    if (fs::exists(dir / "params.toml")) {
      const std::string fit_mode = FlatConfig::load(dir / "params.toml").string_or("fit.mode", "global");
      if (fit_mode != "global") name += "-" + fit_mode;
    }
    std::vector<BlockEvaluation> evals;
    std::vector<EvalReport> reports;
    for (const auto& block : ws.blocks) {
      const Clustering cl = read_clusters_csv(dir / "clusters" / (block_file_stem(block.key) + ".csv"), block, ws.corpus);
      evals.push_back(evaluate_block(block, cl, ws.corpus));
      reports.push_back(EvalReport::from_counts(block.key, block.size(), evals.back().counts));
    }
    rows.push_back({name, aggregate(evals, mode)});
    blocks_csv += block_reports_csv(name, reports, blocks_csv.empty());
    curve_csv += size_curve_csv(name, quality_by_size(reports), curve_csv.empty());
  }
  write_text(out / "report.csv", report_csv(rows));
  write_text(out / "blocks.csv", blocks_csv);
  write_text(out / "size_curve.csv", curve_csv);
  FlatConfig snapshot;
  snapshot.set("aggregate", mode_name);
  snapshot.set("min_gold_authors", static_cast<double>(c.min_authors));
  write_text(out / "manifest.json", manifest_json("evaluate", ws.corpus_hash, "", snapshot));
}

void cmd_fit(const Globals& g, const CorpusArgs& c, const std::string& algorithm, const std::string& grid_path,
             const std::string& objective, const std::string& mode, const std::string& params_path) {
  const fs::path out = require_out(g);
  const Algorithm alg = parse_algorithm(algorithm);
  const Objective obj = parse_objective(objective);
  const FitMode fit_mode = parse_fit_mode(mode);
  const FlatConfig grid_config = grid_path.empty() ? FlatConfig{} : FlatConfig::load(grid_path);
  const CandidateGrid grid = CandidateGrid::from_config(grid_config, alg);
  AlgorithmParams base = AlgorithmParams::from_config(load_params(params_path, g));
  if (grid_config.has("caron.class_bounds")) {
    base.caron.class_bounds = grid_config.numbers("caron.class_bounds");
    base.caron.class_thresholds.assign(base.caron.class_bounds.size() + 1, 0.0);
  }
  const Workspace ws = make_workspace(c.load(), c.min_authors);
  GeneralNameList names;
  if (alg == Algorithm::kCaron) names = GeneralNameList::build(ws.corpus, base.caron.general_name_min_surnames);
  const TuningInput input{ws.corpus, ws.blocks, alg, base, names, g.jobs};
  const FitResult r = fit(input, grid, obj, fit_mode);
  const FlatConfig params = r.to_config(base);
  write_text(out / "params.toml", params.dump());
  write_text(out / "scores.csv", r.table_csv());
  write_text(out / "fit.json", fit_json(r));
  write_text(out / "manifest.json", manifest_json("fit", ws.corpus_hash, algorithm_name(alg), params));
  spdlog::info("{} {} fit: {} = {:.4f} after {} grid points", algorithm_name(alg), fit_mode_name(fit_mode),
               objective_name(obj), r.objective_value, r.evaluations);
}

void cmd_report(const Globals& g, const std::vector<std::string>& evals, const std::vector<std::string>& fits) {
  const fs::path out = require_out(g);
  if (evals.empty() && fits.empty()) throw ValidationError("report needs --eval and/or --fit directories");
  std::string table3, figure1;
  for (const auto& e : evals) {
    const auto join = [](std::string& into, const std::string& text) {
      if (into.empty()) {
        into = text;
      } else {
        into += text.substr(text.find('\n') + 1);
      }
    };
    join(table3, read_text(fs::path(e) / "report.csv"));
    join(figure1, read_text(fs::path(e) / "size_curve.csv"));
  }
  std::string table5 = "algorithm,mode,objective,value,f1_pair,f1_best\n";
  for (const auto& f : fits) {
    const auto j = ordered_json::parse(read_text(fs::path(f) / "fit.json"), nullptr, false);
    if (j.is_discarded()) throw ValidationError(f + "/fit.json is malformed");
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", j.value("value", 0.0), j.value("f1_pair", 0.0),
                  j.value("f1_best", 0.0));
    table5 += j.value("algorithm", "?") + ',' + j.value("mode", "?") + ',' + j.value("objective", "?") + ',' + buf + '\n';
  }
  if (!table3.empty()) write_text(out / "table3.csv", table3);
  if (!figure1.empty()) write_text(out / "figure1.csv", figure1);
  if (!fits.empty()) write_text(out / "table5.csv", table5);
  write_text(out / "manifest.json", manifest_json("report", "", "", FlatConfig{}));
}

void cmd_dump_weights(const Globals& g, const CorpusArgs& c, const std::string& key) {
  const fs::path out = require_out(g);
  const Workspace ws = make_workspace(c.load(), 0);
  const auto it = std::find_if(ws.blocks.begin(), ws.blocks.end(), [&](const Block& b) { return b.key == key; });
  if (it == ws.blocks.end()) throw ValidationError("no block with key '" + key + "'");
  const BlockFeatures features = build_block_features(ws.corpus, it->members, GeneralNameList{});
  const FieldWeighting w(features);
  std::vector<std::tuple<std::string, std::string, std::uint32_t, double>> rows;
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    const auto field = static_cast<Field>(f);
    for (std::uint32_t t = 0; t < features.strings.size(); ++t) {
      if (w.df(field, t) == 0) continue;
      std::string token = features.strings.str(t);
      std::replace(token.begin(), token.end(), '\x1f', '|');
      rows.emplace_back(std::string(field_name(field)), token, w.df(field, t), w.weight(field, t));
    }
  }
  std::sort(rows.begin(), rows.end());
  std::string csv = "field,token,df,weight\n";
  for (const auto& [field, token, df, weight] : rows) {
    std::string quoted = token;
    if (quoted.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char ch : quoted) {
        if (ch == '"') q += '"';
        q += ch;
      }
      quoted = q + '"';
    }
    csv += field + ',' + quoted + ',' + std::to_string(df) + ',' + format_number(weight) + '\n';
  }
  write_text(out / "weights.csv", csv);
  FlatConfig snapshot;
  snapshot.set("block", key);
  write_text(out / "manifest.json", manifest_json("features dump-weights", ws.corpus_hash, "", snapshot));
}

void cmd_pipeline(const Globals& g, const std::string& spec_path, const std::string& grid_path,
                  const std::string& objective, std::size_t min_authors) {
  const fs::path out = require_out(g);
  GenSpec spec = spec_path.empty() ? GenSpec{} : GenSpec::from_config(FlatConfig::load(spec_path));
  if (g.seed) spec.seed = *g.seed;
  PipelineOptions options;
  options.objective = parse_objective(objective);
  options.min_gold_authors = min_authors;
  options.jobs = g.jobs;
  if (!grid_path.empty()) {
    const FlatConfig grid_config = FlatConfig::load(grid_path);
    for (Algorithm alg : kAllAlgorithms) {
      if (alg != Algorithm::kBaseline) options.grids[alg] = CandidateGrid::from_config(grid_config, alg);
    }
  }
  const GeneratedCorpus gen = generate(spec);
  std::istringstream papers(gen.papers), mentions(gen.mentions);
  write_text(out / "spec.toml", spec.to_config().dump());
  run_pipeline(read_corpus(papers, mentions), options, out);
}

void setup_logging(const std::string& level) {
  auto logger = spdlog::get("namedis");
  if (!logger) logger = spdlog::stderr_logger_mt("namedis");
  logger->set_pattern("[%H:%M:%S] [%l] %v");
  spdlog::set_default_logger(logger);
  const auto lvl = spdlog::level::from_str(level);
  if (lvl == spdlog::level::off && level != "off") throw ValidationError("unknown log level '" + level + "'");
  spdlog::set_level(lvl);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Author name disambiguation: generate, block, disambiguate, evaluate and fit", "namedis"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--jobs", g.jobs, "Worker threads for block-level work (0 = all cores)")->capture_default_str();
  app.add_option("--seed", g.seed, "Generator seed (overrides the spec)");
  app.add_option("--config", g.config, "Parameter file used when --params is not given");
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off")->capture_default_str();

  std::string spec_path, algorithm, params_path, grid_path, objective = "f1_pair", mode = "global",
                                                                    aggregate_mode = "pooled", block_key;
  std::vector<std::string> runs, evals, fits;
  CorpusArgs corpus;

  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic corpus with gold ids");
  generate_cmd->add_option("--spec", spec_path, "Generator spec (TOML subset)");

  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a corpus and print a summary");
  corpus.add(ingest_cmd, false);

  auto* block_cmd = app.add_subcommand("block", "Write blocks.jsonl and block_sizes.csv");
  corpus.add(block_cmd);

  auto* dis_cmd = app.add_subcommand("disambiguate", "Cluster every block with one algorithm");
  corpus.add(dis_cmd);
  dis_cmd->add_option("--algorithm", algorithm, "baseline, cota, schulz, caron or backes")->required();
  dis_cmd->add_option("--params", params_path, "Parameter file (e.g. the params.toml written by fit)");

  auto* eval_cmd = app.add_subcommand("evaluate", "Score disambiguation runs against the gold ids");
  corpus.add(eval_cmd);
  eval_cmd->add_option("--clusters", runs, "Run directory written by disambiguate (repeatable)")->required();
  eval_cmd->add_option("--aggregate", aggregate_mode, "pooled or macro")->capture_default_str();

  auto* fit_cmd = app.add_subcommand("fit", "Fit thresholds on a corpus with gold ids");
  corpus.add(fit_cmd);
  fit_cmd->add_option("--algorithm", algorithm, "cota, schulz, caron or backes")->required();
  fit_cmd->add_option("--grid", grid_path, "Candidate grid file (defaults: data/default_grid.toml)");
  fit_cmd->add_option("--objective", objective, "f1_pair or f1_best")->capture_default_str();
  fit_cmd->add_option("--mode", mode, "global, classes (caron) or flexible")->capture_default_str();
  fit_cmd->add_option("--params", params_path, "Base parameter file");

  auto* report_cmd = app.add_subcommand("report", "Join evaluate and fit outputs into summary tables");
  report_cmd->add_option("--eval", evals, "Directory written by evaluate (repeatable)");
  report_cmd->add_option("--fit", fits, "Directory written by fit (repeatable)");

  auto* features_cmd = app.add_subcommand("features", "Inspect features");
  features_cmd->require_subcommand(1);
  auto* weights_cmd = features_cmd->add_subcommand("dump-weights", "Write per-field specificity weights of a block");
  corpus.add(weights_cmd, false);
  weights_cmd->add_option("--block", block_key, "Block key, e.g. \"merton, r\"")->required();

  auto* pipeline_cmd = app.add_subcommand("pipeline", "generate, fit, disambiguate and evaluate in one go");
  pipeline_cmd->add_option("--spec", spec_path, "Generator spec");
  pipeline_cmd->add_option("--grid", grid_path, "Candidate grid file");
  pipeline_cmd->add_option("--objective", objective, "f1_pair or f1_best")->capture_default_str();
  pipeline_cmd->add_option("--min-authors", corpus.min_authors, "Drop blocks with fewer gold authors")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    setup_logging(g.log_level);
    if (*generate_cmd) cmd_generate(g, spec_path);
    else if (*ingest_cmd) cmd_ingest(g, corpus);
    else if (*block_cmd) cmd_block(g, corpus);
    else if (*dis_cmd) cmd_disambiguate(g, corpus, algorithm, params_path);
    else if (*eval_cmd) cmd_evaluate(g, corpus, runs, aggregate_mode);
    else if (*fit_cmd) cmd_fit(g, corpus, algorithm, grid_path, objective, mode, params_path);
    else if (*report_cmd) cmd_report(g, evals, fits);
    else if (*weights_cmd) cmd_dump_weights(g, corpus, block_key);
    else if (*pipeline_cmd) cmd_pipeline(g, spec_path, grid_path, objective, corpus.min_authors);
  } catch (const ValidationError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const InvariantError& e) {
    spdlog::critical("invariant violated: {}", e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::critical("internal error: {}", e.what());
    return 2;
  }
  return 0;
}

}  // namespace namedis::cli
