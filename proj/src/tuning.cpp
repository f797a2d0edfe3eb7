#include "namedis/tuning.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "namedis/errors.hpp"
#include "namedis/parallel.hpp"

namespace namedis {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> range(double from, double to, double step) {
  std::vector<double> v;
  for (int i = 0;; ++i) {
    const double x = from + i * step;
    if (x > to + 1e-9) break;
    v.push_back(std::round(x * 1e9) / 1e9);
  }
  return v;
}

// One assignment of a candidate to every unit (block or size class).
struct Assignment {
  std::vector<std::size_t> choice;
  ContingencyCounts total;
  double value = 0;
};

Assignment make_assignment(const std::vector<std::vector<ContingencyCounts>>& counts,
                           std::vector<std::size_t> choice, Objective objective) {
  Assignment a;
  a.choice = std::move(choice);
  for (std::size_t u = 0; u < counts.size(); ++u) a.total += counts[u][a.choice[u]];
  a.value = objective_value(a.total, objective);
  return a;
}

// Coordinate ascent on the pooled objective: each unit in turn switches to
// the candidate that most improves the overall value. Only strict
// improvements are taken, so the value never drops below the start.
Assignment ascend(const std::vector<std::vector<ContingencyCounts>>& counts, Assignment a,
                  Objective objective) {
  for (int pass = 0; pass < 200; ++pass) {
    bool changed = false;
    for (std::size_t u = 0; u < counts.size(); ++u) {
      ContingencyCounts rest = a.total;
      rest -= counts[u][a.choice[u]];
      std::size_t best = a.choice[u];
      double best_value = a.value;
      for (std::size_t k = 0; k < counts[u].size(); ++k) {
        const double v = objective_value(rest + counts[u][k], objective);
        if (v > best_value) {
          best_value = v;
          best = k;
        }
      }
      if (best != a.choice[u]) {
        a.choice[u] = best;
        a.total = rest + counts[u][best];
        a.value = best_value;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return a;
}

// Per-unit argmax of the unit's own objective; ties to the lowest index.
std::vector<std::size_t> local_argmax(const std::vector<std::vector<ContingencyCounts>>& counts,
                                      Objective objective) {
  std::vector<std::size_t> choice(counts.size(), 0);
  for (std::size_t u = 0; u < counts.size(); ++u) {
    double best = -1;
    for (std::size_t k = 0; k < counts[u].size(); ++k) {
      const double v = objective_value(counts[u][k], objective);
      if (v > best) {
        best = v;
        choice[u] = k;
      }
    }
  }
  return choice;
}

struct GridEvaluation {
  std::vector<std::vector<double>> points;
  std::vector<std::vector<ContingencyCounts>> counts;  // [block][point]
  std::vector<ContingencyCounts> pooled;               // [point]
  std::vector<double> objective;                       // [point]
  std::size_t best = 0;
};

void score_points(GridEvaluation& e, Objective objective) {
  e.pooled.assign(e.points.size(), ContingencyCounts{});
  for (const auto& row : e.counts) {
    for (std::size_t p = 0; p < e.points.size(); ++p) e.pooled[p] += row[p];
  }
  e.objective.resize(e.points.size());
  e.best = 0;
  for (std::size_t p = 0; p < e.points.size(); ++p) {
    e.objective[p] = objective_value(e.pooled[p], objective);
    if (e.objective[p] > e.objective[e.best] ||
        (e.objective[p] == e.objective[e.best] && e.points[p] < e.points[e.best])) {
      e.best = p;
    }
  }
}

GridEvaluation evaluate_grid(const TuningInput& input, std::vector<std::vector<double>> points,
                             Objective objective) {
  if (points.empty()) throw ValidationError("candidate grid is empty");
  GridEvaluation e;
  e.points = std::move(points);
  e.counts = evaluate_points(input, e.points);
  score_points(e, objective);
  return e;
}

std::vector<std::vector<double>> all_points(const CandidateGrid& grid) {
  std::vector<std::vector<double>> points;
  points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) points.push_back(grid.point(i));
  return points;
}

void fill_table(FitResult& r, const GridEvaluation& e) {
  for (std::size_t p = 0; p < e.points.size(); ++p) r.table.push_back({e.points[p], e.objective[p]});
}

FitResult base_result(const TuningInput& input, Objective objective, FitMode mode) {
  FitResult r;
  r.algorithm = input.algorithm;
  r.mode = mode;
  r.objective = objective;
  r.names = tunable_parameters(input.algorithm);
  return r;
}

// Staged search result with every evaluated point and its counts.
struct StagedSearch {
  GridEvaluation all;  // stage 1 points followed by stage 2 points
  std::size_t best = 0;
};

StagedSearch staged_search(const TuningInput& input, const CandidateGrid& grid, Objective objective) {
  const auto& b1 = grid.parameters[0].values;
  const auto& b2 = grid.parameters[1].values;
  const auto& b3 = grid.parameters[2].values;
  const auto& b4 = grid.parameters[3].values;
  std::vector<std::vector<double>> stage1;
  for (double x1 : b1)
    for (double x2 : b2)
      for (double x3 : b3) stage1.push_back({x1, x2, x3, kInf});
  GridEvaluation first = evaluate_grid(input, stage1, objective);
  const auto winner = first.points[first.best];
  std::vector<std::vector<double>> stage2;
  for (double x4 : b4) stage2.push_back({winner[0], winner[1], winner[2], x4});
  GridEvaluation second = evaluate_grid(input, stage2, objective);

  StagedSearch s;
  s.all.points = first.points;
  s.all.points.insert(s.all.points.end(), second.points.begin(), second.points.end());
  s.all.counts = first.counts;
  for (std::size_t b = 0; b < s.all.counts.size(); ++b) {
    s.all.counts[b].insert(s.all.counts[b].end(), second.counts[b].begin(), second.counts[b].end());
  }
  score_points(s.all, objective);
  // Stage 2 picks among its own points only; the stage-1 winner competes
  // through the beta4 = inf candidate when the grid holds it.
  s.best = first.points.size() + second.best;
  return s;
}

}  // namespace

std::vector<std::string> tunable_parameters(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBaseline: return {};
    case Algorithm::kCota: return {"cota.title_threshold", "cota.journal_threshold"};
    case Algorithm::kSchulz: return {"schulz.beta1", "schulz.beta2", "schulz.beta3", "schulz.beta4"};
    case Algorithm::kCaron: return {"caron.threshold"};
    case Algorithm::kBackes: return {"backes.lambda"};
  }
  return {};
}

AlgorithmParams apply_point(const AlgorithmParams& base, Algorithm algorithm, std::span<const double> v) {
  const auto names = tunable_parameters(algorithm);
  if (v.size() != names.size()) {
    throw InvariantError("parameter point has " + std::to_string(v.size()) + " values, " +
                         std::string(algorithm_name(algorithm)) + " has " + std::to_string(names.size()));
  }
  AlgorithmParams p = base;
  switch (algorithm) {
    case Algorithm::kBaseline: break;
    case Algorithm::kCota:
      p.cota.title_threshold = v[0];
      p.cota.journal_threshold = v[1];
      break;
    case Algorithm::kSchulz:
      p.schulz.beta1 = v[0];
      p.schulz.beta2 = v[1];
      p.schulz.beta3 = v[2];
      p.schulz.beta4 = v[3];
      break;
    case Algorithm::kCaron:
      p.caron.class_bounds.clear();
      p.caron.class_thresholds = {v[0]};
      break;
    case Algorithm::kBackes:
      p.backes.lambda = v[0];
      p.backes.fixed_limit.reset();
      break;
  }
  return p;
}

CandidateGrid CandidateGrid::defaults(Algorithm algorithm) {
  CandidateGrid g;
  g.algorithm = algorithm;
  switch (algorithm) {
    case Algorithm::kBaseline: break;
    case Algorithm::kCota:
      g.parameters = {{"cota.title_threshold", range(0, 1, 0.2)}, {"cota.journal_threshold", range(0, 1, 0.2)}};
      break;
    case Algorithm::kSchulz:
      g.parameters = {{"schulz.beta1", {0, 0.5, 1, 1.5, 2}},
                      {"schulz.beta2", {0, 0.5, 1}},
                      {"schulz.beta3", {0.05, 0.2, 0.5}},
                      {"schulz.beta4", {0.5, 1, 2, kInf}}};
      break;
    case Algorithm::kCaron:
      g.parameters = {{"caron.threshold", range(5, 44, 1)}};
      break;
    case Algorithm::kBackes: {
      std::vector<double> lambdas = {0};
      for (int i = 0; i < 30; ++i) {
        const double x = std::pow(10.0, -5.0 + i * (std::log10(0.2) + 5.0) / 29.0);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", x);
        lambdas.push_back(std::stod(buf));
      }
      g.parameters = {{"backes.lambda", sorted_unique(lambdas)}};
      break;
    }
  }
  return g;
}

CandidateGrid CandidateGrid::from_config(const FlatConfig& config, Algorithm algorithm) {
  CandidateGrid g = defaults(algorithm);
  for (auto& p : g.parameters) {
    if (config.has(p.name)) p.values = sorted_unique(config.numbers(p.name));
  }
  g.validate();
  return g;
}

std::size_t CandidateGrid::size() const {
  if (parameters.empty()) return 1;
  std::size_t n = 1;
  for (const auto& p : parameters) n *= p.values.size();
  return n;
}

std::vector<double> CandidateGrid::point(std::size_t index) const {
  std::vector<double> v(parameters.size());
  for (std::size_t k = parameters.size(); k-- > 0;) {
    const auto& values = parameters[k].values;
    v[k] = values[index % values.size()];
    index /= values.size();
  }
  return v;
}

const GridParameter& CandidateGrid::parameter(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw ValidationError("grid has no parameter '" + name + "'");
}

void CandidateGrid::validate() const {
  if (algorithm == Algorithm::kBaseline) throw ValidationError("baseline has no parameters to fit");
  for (const auto& p : parameters) {
    if (p.values.empty()) throw ValidationError("grid parameter '" + p.name + "' has no candidates");
    for (double v : p.values) {
      if (std::isnan(v) || (std::isinf(v) && p.name != "schulz.beta4")) {
        throw ValidationError("grid parameter '" + p.name + "' has a non-finite candidate");
      }
    }
  }
}

std::string_view fit_mode_name(FitMode mode) {
  switch (mode) {
    case FitMode::kGlobal: return "global";
    case FitMode::kClasses: return "classes";
    case FitMode::kFlexible: return "flexible";
  }
  return "?";
}

FitMode parse_fit_mode(std::string_view name) {
  if (name == "global") return FitMode::kGlobal;
  if (name == "classes") return FitMode::kClasses;
  if (name == "flexible") return FitMode::kFlexible;
  throw ValidationError("unknown fit mode '" + std::string(name) + "' (expected global, classes or flexible)");
}

FlatConfig FitResult::to_config(const AlgorithmParams& base) const {
  AlgorithmParams p = apply_point(base, algorithm, chosen);
  if (mode == FitMode::kClasses) {
    p.caron.class_bounds = class_bounds;
    p.caron.class_thresholds = class_thresholds;
  }
  FlatConfig c = p.to_config(algorithm);
  c.set("fit.mode", std::string(fit_mode_name(mode)));
  c.set("fit.objective", std::string(objective_name(objective)));
  c.set("fit.value", objective_value);
  for (const auto& b : per_block) {
    const std::string prefix = "block." + block_file_stem(b.key) + ".";
    for (std::size_t k = 0; k < b.names.size(); ++k) c.set(prefix + b.names[k], b.values[k]);
  }
  return c;
}

std::string FitResult::table_csv() const {
  std::ostringstream out;
  for (const auto& n : names) out << n << ',';
  out << objective_name(objective) << '\n';
  for (const auto& row : table) {
    for (double v : row.values) out << format_number(v) << ',';
    out << format_number(row.objective) << '\n';
  }
  return out.str();
}

std::vector<std::vector<ContingencyCounts>> evaluate_points(const TuningInput& input,
                                                            std::span<const std::vector<double>> points) {
  std::vector<AlgorithmParams> params;
  params.reserve(points.size());
  for (const auto& p : points) {
    params.push_back(apply_point(input.base, input.algorithm, p));
    params.back().validate();
  }
  std::vector<std::vector<ContingencyCounts>> out(input.blocks.size());
  parallel_for(input.blocks.size(), input.jobs, [&](std::size_t b) {
    const Block& block = input.blocks[b];
    const auto gold = block_gold_labels(block, input.corpus);
    auto& row = out[b];
    row.reserve(points.size());
    auto record = [&](const Clustering& c) { row.push_back(contingency_known(c.labels(), gold)); };
    switch (input.algorithm) {
      case Algorithm::kBaseline: {
        const Clustering c = run_baseline(block);
        for (std::size_t p = 0; p < points.size(); ++p) record(c);
        break;
      }
      case Algorithm::kCota: {
        const CotaModel model(build_block_features(input.corpus, block.members, GeneralNameList{}));
        for (const auto& p : params) record(model.cluster(p.cota));
        break;
      }
      case Algorithm::kSchulz: {
        const SchulzModel model(build_block_features(input.corpus, block.members, GeneralNameList{}),
                                input.base.schulz);
        for (const auto& p : params) record(model.cluster(p.schulz));
        break;
      }
      case Algorithm::kCaron: {
        const CaronModel model(build_block_features(input.corpus, block.members, input.names),
                               input.base.caron.table);
        for (const auto& p : params) record(model.cluster(p.caron.threshold_for(block.size())));
        break;
      }
      case Algorithm::kBackes: {
        const BackesModel model(build_block_features(input.corpus, block.members, GeneralNameList{}));
        for (const auto& p : params) record(model.cluster(p.backes.limit(block.size())));
        break;
      }
    }
  });
  return out;
}

TraceCandidates trace_candidates(const MergeTrace& trace, std::span<const std::uint32_t> gold) {
  const std::size_t n = gold.size();
  std::vector<std::uint32_t> singleton(n);
  for (std::size_t i = 0; i < n; ++i) singleton[i] = static_cast<std::uint32_t>(i);
  ContingencyCounts c = contingency_known(singleton, gold);

  // Per cluster: (author, count) cells sorted by author.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> cells(n);
  std::vector<std::uint64_t> cluster_max(n, 0);
  std::uint32_t authors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (gold[i] == kNoGold) continue;
    cells[i] = {{gold[i], 1}};
    cluster_max[i] = 1;
    authors = std::max(authors, gold[i] + 1);
  }
  std::vector<std::uint64_t> author_max(authors, 1);

  TraceCandidates out;
  const auto& steps = trace.steps;
  auto emit = [&](std::size_t k) {
    out.prefix.push_back(k);
    out.limit.push_back(k == steps.size() ? -kInf : (k == 0 ? kInf : steps[k].level));
    out.counts.push_back(c);
  };
  emit(0);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto a = steps[k].cluster_a;
    const auto b = steps[k].cluster_b;
    auto& A = cells[a];
    auto& B = cells[b];
    std::uint64_t sa = 0, sb = 0;
    for (const auto& [_, x] : A) sa += x;
    for (const auto& [_, x] : B) sb += x;
    c.pairs_cluster += sa * sb;
    if (sa > 0 && sb > 0) --c.clusters;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> merged;
    merged.reserve(A.size() + B.size());
    auto i = A.begin();
    auto j = B.begin();
    while (i != A.end() || j != B.end()) {
      if (j == B.end() || (i != A.end() && i->first < j->first)) {
        merged.push_back(*i++);
      } else if (i == A.end() || j->first < i->first) {
        merged.push_back(*j++);
      } else {
        c.pairs_both += i->second * j->second;
        const std::uint64_t total = i->second + j->second;
        if (total > author_max[i->first]) {
          c.best_author += total - author_max[i->first];
          author_max[i->first] = total;
        }
        merged.emplace_back(i->first, total);
        ++i;
        ++j;
      }
    }
    std::uint64_t m = 0;
    for (const auto& [_, x] : merged) m = std::max(m, x);
    c.best_cluster = c.best_cluster + m - cluster_max[a] - cluster_max[b];
    cluster_max[a] = m;
    cluster_max[b] = 0;
    A = std::move(merged);
    B.clear();
    B.shrink_to_fit();
    const std::size_t prefix = k + 1;
    if (prefix == steps.size() || steps[k].level > steps[prefix].level) emit(prefix);
  }
  return out;
}

FitResult fit_global(const TuningInput& input, const CandidateGrid& grid, Objective objective) {
  grid.validate();
  FitResult r = base_result(input, objective, FitMode::kGlobal);
  const GridEvaluation e = evaluate_grid(input, all_points(grid), objective);
  fill_table(r, e);
  r.chosen = e.points[e.best];
  r.counts = e.pooled[e.best];
  r.objective_value = e.objective[e.best];
  r.evaluations = e.points.size();
  return r;
}

FitResult fit_schulz_staged(const TuningInput& input, const CandidateGrid& grid, Objective objective) {
  grid.validate();
  if (input.algorithm != Algorithm::kSchulz || grid.parameters.size() != 4) {
    throw ValidationError("staged fitting needs a schulz grid over beta1..beta4");
  }
  FitResult r = base_result(input, objective, FitMode::kGlobal);
  const StagedSearch s = staged_search(input, grid, objective);
  fill_table(r, s.all);
  r.chosen = s.all.points[s.best];
  r.counts = s.all.pooled[s.best];
  r.objective_value = s.all.objective[s.best];
  r.evaluations = s.all.points.size();
  return r;
}

namespace {

// Size-class thresholds from an evaluated single-parameter caron grid.
void fit_classes_from(const TuningInput& input, const GridEvaluation& e, Objective objective,
                      std::span<const double> class_bounds, FitResult& r) {
  CaronParams classes;
  classes.class_bounds.assign(class_bounds.begin(), class_bounds.end());
  classes.class_thresholds.assign(class_bounds.size() + 1, 0.0);
  classes.validate();
  const std::size_t n_classes = class_bounds.size() + 1;
  const std::size_t n_points = e.points.size();
  std::vector<std::vector<ContingencyCounts>> class_counts(n_classes,
                                                           std::vector<ContingencyCounts>(n_points));
  std::vector<std::size_t> class_blocks(n_classes, 0);
  for (std::size_t b = 0; b < input.blocks.size(); ++b) {
    const std::size_t c = classes.class_of(input.blocks[b].size());
    ++class_blocks[c];
    for (std::size_t p = 0; p < n_points; ++p) class_counts[c][p] += e.counts[b][p];
  }
  std::vector<std::size_t> used;
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (class_blocks[c] > 0) used.push_back(c);
  }
  std::vector<std::vector<ContingencyCounts>> unit_counts;
  for (auto c : used) unit_counts.push_back(class_counts[c]);

  const Assignment independent = make_assignment(unit_counts, local_argmax(unit_counts, objective), objective);
  const Assignment broadcast =
      make_assignment(unit_counts, std::vector<std::size_t>(used.size(), e.best), objective);
  const Assignment best =
      ascend(unit_counts, independent.value >= broadcast.value ? independent : broadcast, objective);

  std::vector<std::optional<double>> thresholds(n_classes);
  for (std::size_t u = 0; u < used.size(); ++u) thresholds[used[u]] = e.points[best.choice[u]][0];
  r.class_thresholds.clear();
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (thresholds[c]) {
      r.class_thresholds.push_back(*thresholds[c]);
      continue;
    }
    std::optional<double> inherited;
    for (std::size_t d = 1; d < n_classes && !inherited; ++d) {
      if (c >= d && thresholds[c - d]) {
        inherited = thresholds[c - d];
      } else if (c + d < n_classes && thresholds[c + d]) {
        inherited = thresholds[c + d];
      }
    }
    const double t = inherited.value_or(e.points[e.best][0]);
    spdlog::warn("caron size class {} has no blocks; using threshold {}", c, format_number(t));
    r.class_thresholds.push_back(t);
  }
  r.class_bounds = classes.class_bounds;
  r.counts = best.total;
  r.objective_value = best.value;
}

}  // namespace

FitResult fit_caron_classes(const TuningInput& input, const CandidateGrid& grid, Objective objective,
                            std::span<const double> class_bounds) {
  grid.validate();
  if (input.algorithm != Algorithm::kCaron) throw ValidationError("size-class fitting is defined for caron only");
  FitResult r = base_result(input, objective, FitMode::kClasses);
  const GridEvaluation e = evaluate_grid(input, all_points(grid), objective);
  fill_table(r, e);
  r.chosen = e.points[e.best];
  r.evaluations = e.points.size();
  fit_classes_from(input, e, objective, class_bounds, r);
  return r;
}

FitResult fit_flexible(const TuningInput& input, const CandidateGrid& grid, Objective objective) {
  grid.validate();
  FitResult r = base_result(input, objective, FitMode::kFlexible);

  GridEvaluation e;
  std::size_t global_best = 0;
  if (input.algorithm == Algorithm::kSchulz) {
    StagedSearch s = staged_search(input, grid, objective);
    global_best = s.best;
    e = std::move(s.all);
  } else {
    e = evaluate_grid(input, all_points(grid), objective);
    global_best = e.best;
  }
  fill_table(r, e);
  r.chosen = e.points[global_best];
  r.evaluations = e.points.size();

  std::vector<std::vector<ContingencyCounts>> unit_counts;
  std::vector<std::size_t> global_choice(input.blocks.size(), global_best);
  std::vector<std::vector<std::vector<double>>> unit_values(input.blocks.size());
  std::vector<std::string> value_names = r.names;

  if (input.algorithm == Algorithm::kBackes) {
    // Every cut point of a block's trace is a candidate limit.
    value_names = {"backes.limit"};
    unit_counts.resize(input.blocks.size());
    const double lambda = e.points[global_best][0];
    parallel_for(input.blocks.size(), input.jobs, [&](std::size_t b) {
      const Block& block = input.blocks[b];
      const BackesModel model(build_block_features(input.corpus, block.members, GeneralNameList{}));
      const TraceCandidates tc = trace_candidates(model.trace(), block_gold_labels(block, input.corpus));
      unit_counts[b] = tc.counts;
      for (double l : tc.limit) unit_values[b].push_back({l});
      const std::size_t cut = cut_position(model.trace(), lambda * static_cast<double>(block.size()));
      global_choice[b] = static_cast<std::size_t>(
          std::lower_bound(tc.prefix.begin(), tc.prefix.end(), cut) - tc.prefix.begin());
    });
  } else {
    unit_counts = e.counts;
    for (auto& v : unit_values) v = e.points;
  }

  std::vector<Assignment> starts;
  starts.push_back(make_assignment(unit_counts, local_argmax(unit_counts, objective), objective));
  starts.push_back(make_assignment(unit_counts, global_choice, objective));
  if (input.algorithm == Algorithm::kCaron) {
    FitResult classes;
    fit_classes_from(input, e, objective, input.base.caron.class_bounds, classes);
    CaronParams cp;
    cp.class_bounds = classes.class_bounds;
    cp.class_thresholds = classes.class_thresholds;
    std::vector<std::size_t> choice(input.blocks.size());
    for (std::size_t b = 0; b < input.blocks.size(); ++b) {
      const double t = cp.threshold_for(input.blocks[b].size());
      choice[b] = static_cast<std::size_t>(
          std::find_if(e.points.begin(), e.points.end(), [t](const auto& p) { return p[0] == t; }) -
          e.points.begin());
    }
    starts.push_back(make_assignment(unit_counts, choice, objective));
  }
  std::size_t pick = 0;
  for (std::size_t s = 1; s < starts.size(); ++s) {
    if (starts[s].value > starts[pick].value) pick = s;
  }
  const Assignment best = ascend(unit_counts, starts[pick], objective);

  for (std::size_t b = 0; b < input.blocks.size(); ++b) {
    r.per_block.push_back({input.blocks[b].key, input.blocks[b].size(), value_names,
                           unit_values[b][best.choice[b]]});
  }
  r.counts = best.total;
  r.objective_value = best.value;
  return r;
}

FitResult fit(const TuningInput& input, const CandidateGrid& grid, Objective objective, FitMode mode) {
  switch (mode) {
    case FitMode::kGlobal:
      return input.algorithm == Algorithm::kSchulz ? fit_schulz_staged(input, grid, objective)
                                                   : fit_global(input, grid, objective);
    case FitMode::kClasses:
      return fit_caron_classes(input, grid, objective, input.base.caron.class_bounds);
    case FitMode::kFlexible:
      return fit_flexible(input, grid, objective);
  }
  throw InvariantError("unhandled fit mode");
}

}  // namespace namedis
