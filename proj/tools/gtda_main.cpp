// Command-line front end: `run` executes one adaptation task, `synth` writes
// a deterministic synthetic dataset, `reproduce` tabulates a grid of tasks.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerics error.
// Diagnostics go to stderr; machine output only to requested files / stdout.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gtda/errors.hpp"
#include "gtda/io.hpp"
#include "gtda/pipeline.hpp"
#include "gtda/synthetic.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerics = 3;

std::optional<std::string> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

struct RunArgs {
  std::string source, source_labels, target;
  std::string target_labels, out_soft, out_hard, report, dump_graph;
  std::string lr_model_out, lr_model_in;
  std::string normalize = "zscore", prior = "none", method = "gtg";
  double alpha = 0.2;
  double eps = 1e-5;
  int max_iter = 1000;
  int knn_rank = gtda::kDefaultNeighborRank;
  std::uint64_t seed = 0;
};

int do_run(const RunArgs& a) {
  gtda::AdaptationTask task;
  task.source_features = a.source;
  task.source_labels = a.source_labels;
  task.target_features = a.target;
  task.target_labels = opt_path(a.target_labels);
  task.out_soft = opt_path(a.out_soft);
  task.out_hard = opt_path(a.out_hard);
  task.report_path = opt_path(a.report);
  task.dump_graph = opt_path(a.dump_graph);
  task.lr_model_out = opt_path(a.lr_model_out);
  task.lr_model_in = opt_path(a.lr_model_in);
  task.seed = a.seed;

  task.options.normalize = a.normalize == "std" ? gtda::NormalizationMode::Std
                                                : gtda::NormalizationMode::ZScore;
  task.options.prior = a.prior == "lr" ? gtda::PriorKind::Lr : gtda::PriorKind::None;
  if (a.method == "lp") {
    task.options.method = gtda::Method::Lp;
  } else if (a.method == "ls") {
    task.options.method = gtda::Method::Ls;
  } else if (a.method == "hf") {
    task.options.method = gtda::Method::Hf;
  } else {
    task.options.method = gtda::Method::Gtg;
  }
  task.options.neighbor_rank = a.knn_rank;
  task.options.dynamics.eps = a.eps;
  task.options.dynamics.max_iter = a.max_iter;
  task.options.baseline.eps = a.eps;
  task.options.baseline.max_iter = a.max_iter;
  task.options.baseline.alpha = a.alpha;

  const gtda::EvaluationReport report = gtda::run_task(task);
  if (!task.report_path) {
    std::cout << gtda::report_to_json(report).dump(2) << '\n';
  }
  return 0;
}

struct SynthArgs {
  std::string out_prefix;
  int n_per_class = 50;
  int classes = 3;
  int dim = 10;
  double shift = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

int do_synth(const SynthArgs& a) {
  gtda::SyntheticConfig cfg;
  cfg.n_per_class = a.n_per_class;
  cfg.classes = a.classes;
  cfg.dim = a.dim;
  cfg.shift = a.shift;
  cfg.noise = a.noise;
  cfg.seed = a.seed;
  const gtda::ShiftDataset data = gtda::generate_synthetic_shift(cfg);

  const std::string s = a.out_prefix + "_source.csv";
  const std::string sl = a.out_prefix + "_source_labels.csv";
  const std::string t = a.out_prefix + "_target.csv";
  const std::string tl = a.out_prefix + "_target_labels.csv";
  gtda::save_matrix_csv(data.source, s);
  gtda::save_labels(data.source_labels, sl);
  gtda::save_matrix_csv(data.target, t);
  gtda::save_labels(data.target_labels, tl);
  std::cout << s << '\n' << sl << '\n' << t << '\n' << tl << '\n';
  return 0;
}

struct ReproduceArgs {
  std::string config;
  std::string out_json;
};

int do_reproduce(const ReproduceArgs& a) {
  const gtda::TableResult table = gtda::reproduce_table(a.config);
  std::cout << table.text;
  if (!a.out_json.empty()) {
    std::ofstream out(a.out_json, std::ios::binary);
    if (!out) throw gtda::DataError("cannot write table: " + a.out_json);
    out << table.json.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-transduction domain adaptation"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Adapt source labels to a target set");
  run->add_option("--source", run_args.source, "Source feature CSV")->required();
  run->add_option("--source-labels", run_args.source_labels, "Source label file")->required();
  run->add_option("--target", run_args.target, "Target feature CSV")->required();
  run->add_option("--target-labels", run_args.target_labels,
                  "Target label file, used only to score predictions");
  run->add_option("--normalize", run_args.normalize, "Feature scaling")
      ->check(CLI::IsMember({"std", "zscore"}))
      ->capture_default_str();
  run->add_option("--prior", run_args.prior, "Target prior for initialization")
      ->check(CLI::IsMember({"none", "lr"}))
      ->capture_default_str();
  run->add_option("--method", run_args.method, "Transduction method")
      ->check(CLI::IsMember({"gtg", "lp", "ls", "hf"}))
      ->capture_default_str();
  run->add_option("--alpha", run_args.alpha, "Label-spreading mixing weight")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  run->add_option("--eps", run_args.eps, "Convergence tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--max-iter", run_args.max_iter, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--knn-rank", run_args.knn_rank, "Neighbor rank for local kernel scales")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--out-soft", run_args.out_soft, "Write soft predictions CSV here");
  run->add_option("--out-hard", run_args.out_hard, "Write hard labels here");
  run->add_option("--report", run_args.report,
                  "Write the JSON report here instead of stdout");
  run->add_option("--dump-graph", run_args.dump_graph,
                  "Write the sparsified affinity graph as 'i j weight' lines");
  run->add_option("--lr-model-out", run_args.lr_model_out,
                  "Save the trained logistic-regression prior as JSON");
  run->add_option("--lr-model-in", run_args.lr_model_in,
                  "Load a previously saved prior instead of training");
  run->add_option("--seed", run_args.seed, "Echoed in the report")->capture_default_str();

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic shifted dataset");
  synth->add_option("--out-prefix", synth_args.out_prefix, "Path prefix for the four output files")
      ->required();
  synth->add_option("--n-per-class", synth_args.n_per_class, "Observations per class per domain")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--classes", synth_args.classes, "Number of classes")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  synth->add_option("--dim", synth_args.dim, "Feature dimension")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  synth->add_option("--shift", synth_args.shift, "Translation applied to the target domain")
      ->capture_default_str();
  synth->add_option("--noise", synth_args.noise, "Extra target noise scale")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth->add_option("--seed", synth_args.seed, "RNG seed")->capture_default_str();

  ReproduceArgs rep_args;
  CLI::App* rep = app.add_subcommand("reproduce", "Run a task grid and tabulate accuracies");
  rep->add_option("--config", rep_args.config, "JSON task-grid description")->required();
  rep->add_option("--out-json", rep_args.out_json, "Write the machine-readable table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run->parsed()) return do_run(run_args);
    if (synth->parsed()) return do_synth(synth_args);
    return do_reproduce(rep_args);
  } catch (const gtda::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gtda::NumericsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerics;
  } catch (const gtda::SingularSystemError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerics;
  } catch (const gtda::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumerics;
  }
}
