#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtda/baselines.hpp"
#include "gtda/graph.hpp"
#include "gtda/gtg.hpp"
#include "gtda/priors.hpp"
#include "gtda/types.hpp"

namespace gtda {

enum class Method { Gtg, Lp, Ls, Hf };
enum class PriorKind { None, Lr };

struct PipelineOptions {
  NormalizationMode normalize = NormalizationMode::ZScore;
  PriorKind prior = PriorKind::None;
  Method method = Method::Gtg;
  int neighbor_rank = kDefaultNeighborRank;
  DynamicsConfig dynamics;
  BaselineConfig baseline;
  LRConfig lr;
};

struct AdaptationOutcome {
  Matrix soft;       // |T| x m, rows sum to 1
  LabelVector hard;  // 1-based argmax labels, ties to the lowest index
  int classes = 0;
  int iterations = 0;
  double tol = 0.0;
  bool converged = true;
};

/// Runs the full transduction pipeline on in-memory data: joint
/// standardization, optional logistic-regression prior, graph construction
/// and sparsification, then the selected transducer on that one shared graph.
/// Label spreading and harmonic soft scores are renormalized per row so the
/// returned soft block is always row-stochastic.
AdaptationOutcome adapt(const Matrix& source, const LabelVector& source_labels,
                        const Matrix& target, const PipelineOptions& opts = {},
                        const std::string& dump_graph_path = {},
                        LRModel* trained_prior = nullptr,
                        const LRModel* preset_prior = nullptr);

struct AdaptationTask {
  std::string source_features;
  std::string source_labels;
  std::string target_features;
  std::optional<std::string> target_labels;  // evaluation only
  PipelineOptions options;
  std::optional<std::string> out_soft;
  std::optional<std::string> out_hard;
  std::optional<std::string> report_path;
  std::optional<std::string> dump_graph;
  std::optional<std::string> lr_model_out;
  std::optional<std::string> lr_model_in;
  std::uint64_t seed = 0;  // echoed in the report; the pipeline itself is deterministic
};

struct EvaluationReport {
  std::optional<double> accuracy;
  std::vector<double> per_class_accuracy;
  int classes = 0;
  int source_count = 0;
  int target_count = 0;
  int iterations = 0;
  double tol = 0.0;
  bool converged = true;
  double wall_time_s = 0.0;
  nlohmann::json config_echo;
};

nlohmann::json report_to_json(const EvaluationReport& report);

/// File-level orchestration: load, adapt, write prediction files and the JSON
/// report. Target labels, when given, are consumed only by the evaluation
/// step after predictions are finalized.
EvaluationReport run_task(const AdaptationTask& task);

struct TableResult {
  std::string text;      // aligned table, one row per run, one column per task + avg
  nlohmann::json json;   // same content, machine-readable
};

/// Runs a grid of (run configuration) x (adaptation task) described by a JSON
/// config and tabulates target accuracies. Tasks with missing files are
/// skipped with a warning and excluded from the average.
TableResult reproduce_table(const std::string& config_path);

const char* method_name(Method m);
const char* prior_name(PriorKind p);

}  // namespace gtda
