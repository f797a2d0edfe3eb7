#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "namedis/algorithms.hpp"
#include "namedis/blocking.hpp"
#include "namedis/config.hpp"
#include "namedis/corpus.hpp"
#include "namedis/evaluation.hpp"
#include "namedis/synthgen.hpp"
#include "namedis/tuning.hpp"

namespace namedis {

inline constexpr std::string_view kToolVersion = "0.1.0";

// An ingested corpus with its evaluation blocks.
struct Workspace {
  Corpus corpus;
  std::string corpus_hash;
  std::vector<Block> blocks;  // kept blocks, sorted by key
  std::vector<DroppedBlock> dropped;
  std::size_t dropped_mentions = 0;
  std::size_t min_gold_authors = 5;
};

// min_gold_authors = 0 keeps every block, including blocks without gold ids.
Workspace make_workspace(Corpus corpus, std::size_t min_gold_authors = 5);

// Runs one algorithm over every block; `params` may hold per-block
// overrides. Results are in block order and independent of `jobs`.
std::vector<BlockResult> disambiguate_blocks(const Workspace& ws, Algorithm algorithm,
                                             const FlatConfig& params, unsigned jobs);

std::vector<BlockEvaluation> evaluate_blocks(const Workspace& ws, std::span<const BlockResult> results);

// --- file formats ----------------------------------------------------------

std::string clusters_csv(const Block& block, const Corpus& corpus, const Clustering& clustering);
// Reads a clusters CSV back into a clustering of `block`; every block
// mention must appear exactly once.
Clustering read_clusters_csv(const std::filesystem::path& path, const Block& block, const Corpus& corpus);
std::string trace_csv(const MergeTrace& trace);

struct NamedReport {
  std::string approach;
  EvalReport report;
};
std::string report_csv(std::span<const NamedReport> rows);
std::string block_reports_csv(std::string_view approach, std::span<const EvalReport> reports, bool header);
std::string size_curve_csv(std::string_view approach, std::span<const SizeCurveRow> rows, bool header);

std::string manifest_json(std::string_view subcommand, std::string_view corpus_hash, std::string_view algorithm,
                          const FlatConfig& params);
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

// Writes a disambiguation run directory: clusters/<stem>.csv,
// traces/<stem>.csv (backes), index.csv, params.toml, manifest.json.
void write_run(const std::filesystem::path& dir, const Workspace& ws, Algorithm algorithm,
               const FlatConfig& params, std::span<const BlockResult> results);

// --- end-to-end -----------------------------------------------------------

struct PipelineOptions {
  std::map<Algorithm, CandidateGrid> grids;  // missing algorithms use defaults
  Objective objective = Objective::kF1Pair;
  std::size_t min_gold_authors = 5;
  unsigned jobs = 0;
};

struct ApproachOutcome {
  Algorithm algorithm = Algorithm::kBaseline;
  FlatConfig params;
  std::optional<FitResult> fit;  // absent for the baseline
  std::vector<BlockResult> results;
  std::vector<EvalReport> block_reports;
  EvalReport overall;
};

struct PipelineOutcome {
  Workspace workspace;
  std::vector<ApproachOutcome> approaches;  // kAllAlgorithms order
};

// Fits each algorithm's global parameters, disambiguates every block with
// them and evaluates. When `out` is non-empty, writes corpus/, fits/,
// runs/, report.csv, blocks.csv, size_curve.csv and manifest.json there.
PipelineOutcome run_pipeline(Corpus corpus, const PipelineOptions& options, const std::filesystem::path& out = {});

}  // namespace namedis
