#pragma once

#include <span>
#include <string>
#include <vector>

#include "namedis/algorithms.hpp"
#include "namedis/blocking.hpp"
#include "namedis/config.hpp"
#include "namedis/corpus.hpp"
#include "namedis/evaluation.hpp"

namespace namedis {

// Tunable parameters of an algorithm, named by their params-file keys.
// Empty for the baseline.
std::vector<std::string> tunable_parameters(Algorithm algorithm);

// Copy of `base` with the named parameters set to `values`.
AlgorithmParams apply_point(const AlgorithmParams& base, Algorithm algorithm, std::span<const double> values);

struct GridParameter {
  std::string name;
  std::vector<double> values;  // ascending, unique
};

struct CandidateGrid {
  Algorithm algorithm = Algorithm::kCaron;
  std::vector<GridParameter> parameters;  // in tunable_parameters order

  // Shipped grid of each algorithm (documented in data/default_grid.toml).
  static CandidateGrid defaults(Algorithm algorithm);
  // Array keys named like the parameters; absent keys keep the defaults.
  static CandidateGrid from_config(const FlatConfig& config, Algorithm algorithm);

  std::size_t size() const;  // number of points
  // Points enumerate in lexicographic order of their value vectors.
  std::vector<double> point(std::size_t index) const;
  const GridParameter& parameter(const std::string& name) const;
  void validate() const;  // non-empty, finite (inf allowed only for schulz.beta4)
};

enum class FitMode { kGlobal, kClasses, kFlexible };
std::string_view fit_mode_name(FitMode mode);
FitMode parse_fit_mode(std::string_view name);

struct ScoredPoint {
  std::vector<double> values;
  double objective = 0;
};

struct BlockChoice {
  std::string key;
  std::size_t size = 0;
  std::vector<std::string> names;
  std::vector<double> values;
};

struct FitResult {
  Algorithm algorithm = Algorithm::kCaron;
  FitMode mode = FitMode::kGlobal;
  Objective objective = Objective::kF1Pair;
  std::vector<std::string> names;
  std::vector<double> chosen;      // global optimum (all modes)
  double objective_value = 0;      // pooled objective of this mode's assignment
  std::vector<ScoredPoint> table;  // pooled objective of every evaluated point
  std::vector<double> class_bounds;
  std::vector<double> class_thresholds;  // classes mode
  std::vector<BlockChoice> per_block;    // flexible mode
  ContingencyCounts counts;              // pooled counts of this mode's assignment
  std::size_t evaluations = 0;           // grid points evaluated

  // Params file for `disambiguate`: `base` with the fitted values, plus
  // per-block overrides in flexible mode.
  FlatConfig to_config(const AlgorithmParams& base) const;
  // Score table as CSV (one row per point).
  std::string table_csv() const;
};

struct TuningInput {
  const Corpus& corpus;
  std::span<const Block> blocks;
  Algorithm algorithm;
  AlgorithmParams base;
  const GeneralNameList& names;
  unsigned jobs = 1;
};

// counts[block][point]; parameter-independent work is done once per block.
std::vector<std::vector<ContingencyCounts>> evaluate_points(const TuningInput& input,
                                                            std::span<const std::vector<double>> points);

// Trace-prefix candidates of one Backes block: prefix lengths that some
// limit produces, the limit producing each, and the counts after it.
struct TraceCandidates {
  std::vector<std::size_t> prefix;
  std::vector<double> limit;
  std::vector<ContingencyCounts> counts;
};
TraceCandidates trace_candidates(const MergeTrace& trace, std::span<const std::uint32_t> gold);

FitResult fit_global(const TuningInput& input, const CandidateGrid& grid, Objective objective);
FitResult fit_schulz_staged(const TuningInput& input, const CandidateGrid& grid, Objective objective);
FitResult fit_caron_classes(const TuningInput& input, const CandidateGrid& grid, Objective objective,
                            std::span<const double> class_bounds);
FitResult fit_flexible(const TuningInput& input, const CandidateGrid& grid, Objective objective);

// Dispatch used by the CLI: global for schulz is the staged search; classes
// is only defined for caron.
FitResult fit(const TuningInput& input, const CandidateGrid& grid, Objective objective, FitMode mode);

}  // namespace namedis
