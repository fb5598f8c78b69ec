#include "gtda/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtda/errors.hpp"
#include "gtda/graph.hpp"
#include "gtda/io.hpp"
#include "gtda/preprocess.hpp"

namespace gtda {

namespace {

// Label spreading and harmonic scores are nonnegative but not normalized;
// turn each row into a distribution so every soft output obeys the same
// contract. Row argmax is unaffected.
void normalize_rows(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double s = m.row(i).sum();
    if (s > 0.0) {
      m.row(i) /= s;
    } else {
      m.row(i).setConstant(1.0 / static_cast<double>(m.cols()));
    }
  }
}

LabelVector argmax_labels(const Matrix& soft) {
  LabelVector hard(static_cast<std::size_t>(soft.rows()));
  for (Eigen::Index i = 0; i < soft.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index h = 1; h < soft.cols(); ++h) {
      if (soft(i, h) > soft(i, best)) best = h;
    }
    hard[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
  }
  return hard;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::Gtg: return "gtg";
    case Method::Lp: return "lp";
    case Method::Ls: return "ls";
    case Method::Hf: return "hf";
  }
  return "?";
}

const char* prior_name(PriorKind p) {
  return p == PriorKind::Lr ? "lr" : "none";
}

AdaptationOutcome adapt(const Matrix& source, const LabelVector& source_labels,
                        const Matrix& target, const PipelineOptions& opts,
                        const std::string& dump_graph_path,
                        LRModel* trained_prior, const LRModel* preset_prior) {
  if (source.rows() != static_cast<Eigen::Index>(source_labels.size())) {
    throw DimensionError("adapt: " + std::to_string(source.rows()) + " source rows vs " +
                         std::to_string(source_labels.size()) + " source labels");
  }
  const int m = num_classes(source_labels);
  if (m < 1) throw InitError("adapt: no source labels");
  const int ns = static_cast<int>(source.rows());
  const int nt = static_cast<int>(target.rows());

  auto [std_source, std_target] = joint_standardize(source, target, opts.normalize);

  std::optional<Matrix> prior;
  if (opts.prior == PriorKind::Lr) {
    LRModel model;
    if (preset_prior) {
      model = *preset_prior;
      if (model.classes != m) {
        throw ConfigError("adapt: preloaded model has " + std::to_string(model.classes) +
                          " classes, labels imply " + std::to_string(m));
      }
    } else {
      model = train_lr(std_source, source_labels, opts.lr);
    }
    prior = predict_proba(model, std_target);
    if (trained_prior) *trained_prior = std::move(model);
  }

  Matrix x0 = init_profile(source_labels, m, prior, nt);

  Matrix stacked(ns + nt, std_source.cols());
  stacked.topRows(ns) = std_source;
  stacked.bottomRows(nt) = std_target;
  const Matrix distances = pairwise_cosine_distances(stacked);
  const Vector scales = local_scales(distances, opts.neighbor_rank);
  const SparseMatrix w = sparsify(build_affinity(distances, scales), distances);

  if (!dump_graph_path.empty()) dump_affinity(w, dump_graph_path);
  const int components = connected_components(w);
  if (components > 1) {
    warn("sparsified graph has " + std::to_string(components) +
         " connected components; label propagation may not reach every node");
  }

  AdaptationOutcome out;
  out.classes = m;
  switch (opts.method) {
    case Method::Gtg: {
      DynamicsResult dyn = run_dynamics(x0, w, opts.dynamics);
      auto [soft, hard] = extract_predictions(dyn.profile, ns);
      out.soft = std::move(soft);
      out.hard = std::move(hard);
      out.iterations = dyn.iterations;
      out.tol = dyn.tol;
      out.converged = dyn.converged;
      break;
    }
    case Method::Lp: {
      BaselineStats stats;
      Matrix y = label_propagation(w, x0, ns, opts.baseline, &stats);
      out.soft = y.bottomRows(nt);
      out.hard = argmax_labels(out.soft);
      out.iterations = stats.iterations;
      out.tol = stats.tol;
      out.converged = stats.converged;
      break;
    }
    case Method::Ls: {
      BaselineStats stats;
      Matrix f = label_spreading(w, x0, opts.baseline, &stats);
      out.soft = f.bottomRows(nt);
      normalize_rows(out.soft);
      out.hard = argmax_labels(out.soft);
      out.iterations = stats.iterations;
      out.tol = stats.tol;
      out.converged = stats.converged;
      break;
    }
    case Method::Hf: {
      Matrix f = harmonic_function(w, x0.topRows(ns), ns, opts.baseline.hf_solver);
      out.soft = f.bottomRows(nt);
      normalize_rows(out.soft);
      out.hard = argmax_labels(out.soft);
      out.iterations = 0;
      out.tol = 0.0;
      out.converged = true;
      break;
    }
  }
  return out;
}

nlohmann::json report_to_json(const EvaluationReport& report) {
  nlohmann::json doc;
  if (report.accuracy) {
    doc["accuracy"] = *report.accuracy;
    doc["per_class_accuracy"] = report.per_class_accuracy;
  }
  doc["classes"] = report.classes;
  doc["source_count"] = report.source_count;
  doc["target_count"] = report.target_count;
  doc["iterations"] = report.iterations;
  doc["tol"] = report.tol;
  doc["converged"] = report.converged;
  doc["wall_time_s"] = report.wall_time_s;
  doc["config"] = report.config_echo;
  return doc;
}

EvaluationReport run_task(const AdaptationTask& task) {
  const auto t0 = std::chrono::steady_clock::now();

  const Matrix source = load_features(task.source_features);
  const LabelVector y_source = load_labels(task.source_labels);
  const Matrix target = load_features(task.target_features);

  LRModel preset;
  const LRModel* preset_ptr = nullptr;
  if (task.lr_model_in) {
    preset = load_lr_model(*task.lr_model_in);
    preset_ptr = &preset;
  }

  LRModel trained;
  AdaptationOutcome outcome =
      adapt(source, y_source, target, task.options,
            task.dump_graph.value_or(std::string{}),
            task.lr_model_out ? &trained : nullptr, preset_ptr);

  if (task.lr_model_out) {
    if (task.options.prior != PriorKind::Lr) {
      warn("no logistic-regression prior was trained; skipping model dump");
    } else {
      save_lr_model(trained, *task.lr_model_out);
    }
  }
  if (task.out_soft) save_matrix_csv(outcome.soft, *task.out_soft);
  if (task.out_hard) save_labels(outcome.hard, *task.out_hard);

  EvaluationReport report;
  report.classes = outcome.classes;
  report.source_count = static_cast<int>(source.rows());
  report.target_count = static_cast<int>(target.rows());
  report.iterations = outcome.iterations;
  report.tol = outcome.tol;
  report.converged = outcome.converged;

  // Target labels are read only here, after predictions are finalized.
  if (task.target_labels) {
    const LabelVector y_target = load_labels(*task.target_labels);
    if (y_target.size() != outcome.hard.size()) {
      throw DataError("run_task: " + std::to_string(y_target.size()) +
                      " target labels vs " + std::to_string(outcome.hard.size()) +
                      " target rows");
    }
    const int eval_classes = std::max(outcome.classes, num_classes(y_target));
    std::vector<int> correct(static_cast<std::size_t>(eval_classes), 0);
    std::vector<int> total(static_cast<std::size_t>(eval_classes), 0);
    int hits = 0;
    for (std::size_t i = 0; i < y_target.size(); ++i) {
      const std::size_t c = static_cast<std::size_t>(y_target[i] - 1);
      ++total[c];
      if (y_target[i] == outcome.hard[i]) {
        ++correct[c];
        ++hits;
      }
    }
    report.accuracy = static_cast<double>(hits) / static_cast<double>(y_target.size());
    report.per_class_accuracy.resize(static_cast<std::size_t>(eval_classes), 0.0);
    for (std::size_t c = 0; c < total.size(); ++c) {
      report.per_class_accuracy[c] =
          total[c] > 0 ? static_cast<double>(correct[c]) / static_cast<double>(total[c]) : 0.0;
    }
  }

  nlohmann::json echo;
  echo["source"] = task.source_features;
  echo["source_labels"] = task.source_labels;
  echo["target"] = task.target_features;
  if (task.target_labels) echo["target_labels"] = *task.target_labels;
  echo["normalize"] = task.options.normalize == NormalizationMode::ZScore ? "zscore" : "std";
  echo["prior"] = prior_name(task.options.prior);
  echo["method"] = method_name(task.options.method);
  echo["alpha"] = task.options.baseline.alpha;
  echo["eps"] = task.options.dynamics.eps;
  echo["max_iter"] = task.options.dynamics.max_iter;
  echo["knn_rank"] = task.options.neighbor_rank;
  echo["seed"] = task.seed;
  report.config_echo = std::move(echo);

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (task.report_path) {
    std::ofstream out(*task.report_path, std::ios::binary);
    if (!out) throw DataError("cannot write report: " + *task.report_path);
    out << report_to_json(report).dump(2) << '\n';
  }
  return report;
}

namespace {

PipelineOptions options_from_config(const nlohmann::json& cfg) {
  PipelineOptions opts;
  if (cfg.contains("normalize")) {
    const std::string v = cfg["normalize"].get<std::string>();
    if (v == "zscore") {
      opts.normalize = NormalizationMode::ZScore;
    } else if (v == "std") {
      opts.normalize = NormalizationMode::Std;
    } else {
      throw ConfigError("reproduce_table: unknown normalize mode '" + v + "'");
    }
  }
  if (cfg.contains("eps")) {
    opts.dynamics.eps = cfg["eps"].get<double>();
    opts.baseline.eps = opts.dynamics.eps;
  }
  if (cfg.contains("max_iter")) {
    opts.dynamics.max_iter = cfg["max_iter"].get<int>();
    opts.baseline.max_iter = opts.dynamics.max_iter;
  }
  if (cfg.contains("knn_rank")) opts.neighbor_rank = cfg["knn_rank"].get<int>();
  if (cfg.contains("alpha")) opts.baseline.alpha = cfg["alpha"].get<double>();
  return opts;
}

Method method_from_string(const std::string& v) {
  if (v == "gtg") return Method::Gtg;
  if (v == "lp") return Method::Lp;
  if (v == "ls") return Method::Ls;
  if (v == "hf") return Method::Hf;
  throw ConfigError("reproduce_table: unknown method '" + v + "'");
}

PriorKind prior_from_string(const std::string& v) {
  if (v == "none") return PriorKind::None;
  if (v == "lr") return PriorKind::Lr;
  throw ConfigError("reproduce_table: unknown prior '" + v + "'");
}

}  // namespace

TableResult reproduce_table(const std::string& config_path) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw DataError("cannot open config: " + config_path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid table config: ") + e.what());
  }
  if (!cfg.contains("tasks") || !cfg["tasks"].is_array() || cfg["tasks"].empty()) {
    throw ConfigError("reproduce_table: config needs a nonempty 'tasks' array");
  }

  const PipelineOptions base_opts = options_from_config(cfg);
  struct Run {
    std::string name;
    Method method;
    PriorKind prior;
  };
  std::vector<Run> runs;
  if (cfg.contains("runs")) {
    for (const auto& r : cfg["runs"]) {
      runs.push_back({r.at("name").get<std::string>(),
                      method_from_string(r.at("method").get<std::string>()),
                      prior_from_string(r.value("prior", "none"))});
    }
  } else {
    runs.push_back({"GTDA", Method::Gtg, PriorKind::None});
    runs.push_back({"GTDA+LR", Method::Gtg, PriorKind::Lr});
  }

  struct TaskFiles {
    std::string name, source, source_labels, target, target_labels;
    bool available;
  };
  std::vector<TaskFiles> tasks;
  for (const auto& t : cfg["tasks"]) {
    TaskFiles tf{t.at("name").get<std::string>(), t.at("source").get<std::string>(),
                 t.at("source_labels").get<std::string>(), t.at("target").get<std::string>(),
                 t.at("target_labels").get<std::string>(), true};
    for (const std::string& p : {tf.source, tf.source_labels, tf.target, tf.target_labels}) {
      if (!std::filesystem::exists(p)) {
        warn("task '" + tf.name + "' skipped: missing file " + p);
        tf.available = false;
        break;
      }
    }
    tasks.push_back(std::move(tf));
  }

  nlohmann::json out_json;
  out_json["runs"] = nlohmann::json::array();

  std::vector<std::vector<std::string>> cells(runs.size());
  std::vector<double> averages(runs.size(), std::nan(""));
  for (std::size_t ri = 0; ri < runs.size(); ++ri) {
    nlohmann::json run_json;
    run_json["name"] = runs[ri].name;
    run_json["method"] = method_name(runs[ri].method);
    run_json["prior"] = prior_name(runs[ri].prior);
    run_json["accuracy"] = nlohmann::json::object();

    double sum = 0.0;
    int counted = 0;
    for (const TaskFiles& tf : tasks) {
      if (!tf.available) {
        cells[ri].push_back("-");
        continue;
      }
      AdaptationTask task;
      task.source_features = tf.source;
      task.source_labels = tf.source_labels;
      task.target_features = tf.target;
      task.target_labels = tf.target_labels;
      task.options = base_opts;
      task.options.method = runs[ri].method;
      task.options.prior = runs[ri].prior;
      const EvaluationReport report = run_task(task);
      const double acc = report.accuracy.value_or(0.0);
      sum += acc;
      ++counted;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", 100.0 * acc);
      cells[ri].push_back(buf);
      run_json["accuracy"][tf.name] = acc;
    }
    if (counted > 0) {
      averages[ri] = sum / counted;
      run_json["avg"] = averages[ri];
    } else {
      run_json["avg"] = nullptr;
    }
    out_json["runs"].push_back(std::move(run_json));
  }

  // Aligned text rendering.
  std::vector<std::string> headers{"method"};
  for (const TaskFiles& tf : tasks) headers.push_back(tf.name);
  headers.push_back("avg");
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) width[c] = headers[c].size();
  std::vector<std::vector<std::string>> table;
  for (std::size_t ri = 0; ri < runs.size(); ++ri) {
    std::vector<std::string> row{runs[ri].name};
    row.insert(row.end(), cells[ri].begin(), cells[ri].end());
    if (std::isnan(averages[ri])) {
      row.push_back("-");
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", 100.0 * averages[ri]);
      row.push_back(buf);
    }
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    table.push_back(std::move(row));
  }

  std::ostringstream text;
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      text << (c ? "  " : "");
      text << row[c] << std::string(width[c] - row[c].size(), ' ');
    }
    text << '\n';
  };
  emit_row(headers);
  for (const auto& row : table) emit_row(row);

  return {text.str(), std::move(out_json)};
}

}  // namespace gtda
