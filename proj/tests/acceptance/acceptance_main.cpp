// Acceptance gate for the transduction engine. Each numbered criterion prints
// exactly one [PASS]/[FAIL]/[SKIP] line with a short measurement summary; the
// process exits nonzero when any executed criterion fails.
//
// Usage: gtda_acceptance <path-to-cli-binary> <scratch-dir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtda/baselines.hpp"
#include "gtda/graph.hpp"
#include "gtda/gtg.hpp"
#include "gtda/pipeline.hpp"
#include "gtda/preprocess.hpp"
#include "gtda/priors.hpp"
#include "gtda/synthetic.hpp"
#include "../test_helpers.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << v;
  return out.str();
}

[[noreturn]] void fail(const std::string& message) { throw std::runtime_error(message); }

std::string g_cli;
std::string g_scratch;

std::string scratch_file(const std::string& name) {
  return (std::filesystem::path(g_scratch) / name).string();
}

void run_cli(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " >/dev/null 2>" + scratch_file("cli_err.log");
  const int rc = std::system(cmd.c_str());
  if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) {
    fail("CLI command failed (" + args.substr(0, 60) + "...): " +
         testutil::read_file(scratch_file("cli_err.log")).substr(0, 200));
  }
}

// ---------------------------------------------------------------------------
// Criteria 1 and 2 share the randomized dynamics suite: criterion 1 checks the
// state-space invariants along every trajectory, criterion 2 audits the
// equilibrium certificate of each converged endpoint.

struct DynRecord {
  gtda::SparseMatrix w;
  gtda::Matrix profile;
  double tol = 0.0;
  bool converged = false;
};

std::vector<DynRecord> g_dyn_records;

std::string criterion1_property_suite() {
  const auto t0 = Clock::now();
  constexpr int kInstances = 110;
  constexpr double kEps = 1e-5;
  constexpr int kMaxIter = 1000;

  testutil::Rng rng(1234);
  g_dyn_records.clear();
  g_dyn_records.reserve(kInstances);

  for (int trial = 0; trial < kInstances; ++trial) {
    const int m = rng.uniform_int(2, 5);
    const int n = rng.uniform_int(m + 2, 100);
    const int labeled = rng.uniform_int(m, n - 1);
    // Every third instance may be disconnected or contain isolated players.
    gtda::SparseMatrix w = trial % 3 == 0 ? testutil::random_affinity(rng, n)
                                          : testutil::random_connected_affinity(rng, n);
    const gtda::LabelVector labels = testutil::random_labels(rng, labeled, m);
    const gtda::Matrix x0 = testutil::random_profile(rng, labels, m, n);

    gtda::Matrix x = x0;
    double f = gtda::potential(x, w);
    double tol = 0.0;
    bool converged = false;
    for (int it = 0; it < kMaxIter; ++it) {
      gtda::Matrix next = gtda::replicator_step(x, w);
      tol = (next - x).norm();
      const double f_next = gtda::potential(next, w);
      if (f_next < f - 1e-9) {
        fail("instance " + std::to_string(trial) + ": potential fell from " + fmt(f, 12) +
             " to " + fmt(f_next, 12));
      }
      f = f_next;
      x = std::move(next);

      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double row_sum = x.row(i).sum();
        if (std::abs(row_sum - 1.0) > 1e-9) {
          fail("instance " + std::to_string(trial) + ": row " + std::to_string(i) +
               " sums to " + fmt(row_sum, 12));
        }
        for (Eigen::Index h = 0; h < x.cols(); ++h) {
          if (x(i, h) < 0.0) fail("negative strategy mass");
          if (x0(i, h) == 0.0 && x(i, h) != 0.0) {
            fail("instance " + std::to_string(trial) + ": zero entry (" + std::to_string(i) +
                 "," + std::to_string(h) + ") became " + fmt(x(i, h), 6));
          }
        }
      }
      for (int i = 0; i < labeled; ++i) {
        if (x(i, labels[static_cast<std::size_t>(i)] - 1) != 1.0) {
          fail("instance " + std::to_string(trial) + ": labeled row " + std::to_string(i) +
               " drifted");
        }
      }
      if (tol < kEps) {
        converged = true;
        break;
      }
    }
    g_dyn_records.push_back({std::move(w), std::move(x), tol, converged});
  }

  const double elapsed = seconds_since(t0);
  if (elapsed >= 60.0) fail("suite took " + fmt(elapsed) + " s, budget is 60 s");
  return std::to_string(kInstances) + " instances, " + fmt(elapsed) + " s";
}

std::string criterion2_nash_certificate() {
  if (g_dyn_records.empty()) fail("property suite did not run");
  int converged_runs = 0;
  double worst_fraction = 0.0;
  for (std::size_t idx = 0; idx < g_dyn_records.size(); ++idx) {
    const DynRecord& rec = g_dyn_records[idx];
    if (!rec.converged) continue;
    ++converged_runs;
    const gtda::Matrix payoff = gtda::payoff_matrix(rec.profile, rec.w);
    const double allowance = 10.0 * rec.tol;
    for (Eigen::Index i = 0; i < rec.profile.rows(); ++i) {
      const double expected = rec.profile.row(i).dot(payoff.row(i));
      for (Eigen::Index h = 0; h < rec.profile.cols(); ++h) {
        const double mass = rec.profile(i, h);
        // Supported strategy: carries mass, and is not in the middle of
        // decaying to zero (mass at least a tenth of the expected payoff).
        if (mass <= 0.0 || mass < expected / 10.0) continue;
        const double deviation = std::abs(payoff(i, h) - expected);
        if (deviation > allowance) {
          fail("instance " + std::to_string(idx) + ": player " + std::to_string(i) +
               " strategy " + std::to_string(h) + " deviates by " + fmt(deviation, 6) +
               " > 10*tol = " + fmt(allowance, 6));
        }
        if (allowance > 0.0) {
          worst_fraction = std::max(worst_fraction, deviation / allowance);
        } else if (deviation > 0.0) {
          fail("nonzero deviation at an exact fixed point");
        }
      }
    }
  }
  if (converged_runs == 0) fail("no converged runs to certify");
  return std::to_string(converged_runs) + " converged runs, worst deviation " +
         fmt(100.0 * worst_fraction, 3) + "% of allowance";
}

// ---------------------------------------------------------------------------

std::string criterion3_hand_oracles() {
  // Two-player consensus game, worked by hand.
  gtda::Matrix pair_w(2, 2);
  pair_w << 0.0, 1.0, 1.0, 0.0;
  const gtda::SparseMatrix w2 = pair_w.sparseView();
  gtda::Matrix x(2, 2);
  x << 1.0, 0.0, 0.5, 0.5;

  const gtda::Matrix payoff = gtda::payoff_matrix(x, w2);
  if (std::abs(payoff(0, 0) - 0.5) > 1e-12 || std::abs(payoff(0, 1) - 0.5) > 1e-12 ||
      std::abs(payoff(1, 0) - 1.0) > 1e-12 || std::abs(payoff(1, 1) - 0.0) > 1e-12) {
    fail("two-player payoff matrix mismatch");
  }
  const gtda::Matrix stepped = gtda::replicator_step(x, w2);
  if (std::abs(stepped(1, 0) - 1.0) > 1e-12 || std::abs(stepped(1, 1)) > 1e-12) {
    fail("two-player replicator step mismatch");
  }
  const gtda::DynamicsResult dyn = gtda::run_dynamics(x, w2);
  if (!dyn.converged || std::abs(dyn.profile(1, 0) - 1.0) > 1e-12) {
    fail("two-player dynamics did not reach the consensus vertex");
  }

  // One labeled node propagating over a single edge.
  gtda::Matrix y0(2, 2);
  y0 << 1.0, 0.0, 0.5, 0.5;
  const gtda::Matrix lp = gtda::label_propagation(w2, y0, 1);
  if (std::abs(lp(1, 0) - 1.0) > 1e-12 || std::abs(lp(1, 1)) > 1e-12) {
    fail("2-node label propagation mismatch");
  }

  // Chain with both endpoints labeled: the middle averages them.
  gtda::Matrix chain = gtda::Matrix::Zero(3, 3);
  chain(0, 2) = chain(2, 0) = 1.0;
  chain(1, 2) = chain(2, 1) = 1.0;
  gtda::Matrix y_l(2, 2);
  y_l << 1.0, 0.0, 0.0, 1.0;
  const gtda::Matrix hf = gtda::harmonic_function(chain.sparseView(), y_l, 2);
  if (std::abs(hf(2, 0) - 0.5) > 1e-12 || std::abs(hf(2, 1) - 0.5) > 1e-12) {
    fail("chain harmonic value mismatch");
  }

  // Random cross-checks: both harmonic solver routes against each other and
  // the dense oracle, and the spreading iterate against its closed form.
  testutil::Rng rng(777);
  double worst_hf = 0.0, worst_ls = 0.0;
  constexpr int kInstances = 50;
  for (int trial = 0; trial < kInstances; ++trial) {
    const int m = rng.uniform_int(2, 4);
    const int n = rng.uniform_int(m + 3, 50);
    const int labeled = rng.uniform_int(m, n - 2);
    const gtda::SparseMatrix w = testutil::random_connected_affinity(rng, n);
    const gtda::LabelVector labels = testutil::random_labels(rng, labeled, m);
    const gtda::Matrix init = gtda::init_profile(labels, m, std::nullopt, n - labeled);

    const gtda::Matrix y_labeled = init.topRows(labeled);
    const gtda::Matrix direct =
        gtda::harmonic_function(w, y_labeled, labeled, gtda::HfSolver::Direct);
    const gtda::Matrix iterative =
        gtda::harmonic_function(w, y_labeled, labeled, gtda::HfSolver::ConjugateGradient);
    const gtda::Matrix hf_oracle = testutil::harmonic_closed_form(w, y_labeled, labeled);
    const double hf_gap = std::max(testutil::max_abs_diff(direct, iterative),
                                   testutil::max_abs_diff(direct, hf_oracle));
    if (hf_gap > 1e-6) {
      fail("harmonic solvers disagree by " + fmt(hf_gap, 6) + " on instance " +
           std::to_string(trial));
    }
    worst_hf = std::max(worst_hf, hf_gap);

    gtda::BaselineConfig cfg;
    cfg.eps = 1e-9;
    cfg.max_iter = 200000;
    const gtda::Matrix ls = gtda::label_spreading(w, init, cfg);
    const gtda::Matrix ls_oracle = testutil::spreading_closed_form(w, init, cfg.alpha);
    const double ls_gap = testutil::max_abs_diff(ls, ls_oracle);
    if (ls_gap > 1e-6) {
      fail("spreading iterate is " + fmt(ls_gap, 6) + " from its closed form on instance " +
           std::to_string(trial));
    }
    worst_ls = std::max(worst_ls, ls_gap);
  }
  return "hand examples exact; over " + std::to_string(kInstances) +
         " instances worst gaps: harmonic " + fmt(worst_hf, 3) + ", spreading " +
         fmt(worst_ls, 3);
}

// ---------------------------------------------------------------------------

std::string criterion4_gradient_check() {
  testutil::Rng rng(555);
  const int n = 20, d = 5, m = 3;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const gtda::Matrix f = testutil::random_matrix(rng, n, d, -2.0, 2.0);
    const gtda::LabelVector y = testutil::random_labels(rng, n, m);
    const gtda::Matrix w = testutil::random_matrix(rng, m, d, -0.5, 0.5);
    gtda::Vector b(m);
    for (int h = 0; h < m; ++h) b(h) = rng.uniform(-0.5, 0.5);
    const double c = trial % 2 == 0 ? 0.1 : 10.0;

    gtda::Matrix gw;
    gtda::Vector gb;
    gtda::lr_gradient(w, b, f, y, c, gw, gb);

    const double h_step = 1e-6;
    auto check = [&](double analytic, double numeric, const char* where) {
      const double rel = std::abs(analytic - numeric) /
                         std::max({1.0, std::abs(analytic), std::abs(numeric)});
      if (rel > 1e-5) {
        fail(std::string(where) + " gradient relative error " + fmt(rel, 6) +
             " on instance " + std::to_string(trial));
      }
      worst = std::max(worst, rel);
    };
    for (int r = 0; r < m; ++r) {
      for (int col = 0; col < d; ++col) {
        gtda::Matrix wp = w, wm = w;
        wp(r, col) += h_step;
        wm(r, col) -= h_step;
        check(gw(r, col),
              (gtda::lr_objective(wp, b, f, y, c) - gtda::lr_objective(wm, b, f, y, c)) /
                  (2.0 * h_step),
              "weight");
      }
      gtda::Vector bp = b, bm = b;
      bp(r) += h_step;
      bm(r) -= h_step;
      check(gb(r),
            (gtda::lr_objective(w, bp, f, y, c) - gtda::lr_objective(w, bm, f, y, c)) /
                (2.0 * h_step),
            "bias");
    }
  }
  return "10 instances (n=20, d=5, m=3), worst relative error " + fmt(worst, 3);
}

// ---------------------------------------------------------------------------

std::string criterion5_synthetic_regression() {
  const auto t0 = Clock::now();
  gtda::SyntheticConfig cfg;
  cfg.n_per_class = 50;
  cfg.classes = 3;
  cfg.dim = 10;
  cfg.shift = 1.0;
  cfg.noise = 0.10;
  cfg.seed = 17;
  const gtda::ShiftDataset data = gtda::generate_synthetic_shift(cfg);

  auto accuracy = [&](const gtda::LabelVector& predicted) {
    int hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
      if (predicted[i] == data.target_labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
  };

  // Source-only classifier: the cross-validated logistic model applied to the
  // target rows directly.
  auto [std_source, std_target] =
      gtda::joint_standardize(data.source, data.target, gtda::NormalizationMode::ZScore);
  const gtda::LRModel lr = gtda::train_lr(std_source, data.source_labels);
  const gtda::Matrix proba = gtda::predict_proba(lr, std_target);
  gtda::LabelVector lr_hard(static_cast<std::size_t>(proba.rows()));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index h = 1; h < proba.cols(); ++h)
      if (proba(i, h) > proba(i, best)) best = h;
    lr_hard[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
  }
  const double lr_acc = accuracy(lr_hard);

  const gtda::AdaptationOutcome plain =
      gtda::adapt(data.source, data.source_labels, data.target);
  const double plain_acc = accuracy(plain.hard);

  gtda::PipelineOptions with_prior;
  with_prior.prior = gtda::PriorKind::Lr;
  const gtda::AdaptationOutcome primed =
      gtda::adapt(data.source, data.source_labels, data.target, with_prior);
  const double primed_acc = accuracy(primed.hard);

  const double elapsed = seconds_since(t0);
  if (primed_acc < lr_acc) {
    fail("transduction with prior (" + fmt(primed_acc) + ") fell below the source-only model (" +
         fmt(lr_acc) + ")");
  }
  if (plain_acc < 0.80) fail("plain transduction accuracy " + fmt(plain_acc) + " < 0.80");
  if (elapsed >= 10.0) fail("took " + fmt(elapsed) + " s, budget is 10 s");
  return "graph " + fmt(plain_acc) + " / graph+prior " + fmt(primed_acc) +
         " / source-only " + fmt(lr_acc) + ", " + fmt(elapsed) + " s";
}

// ---------------------------------------------------------------------------

std::optional<std::string> criterion6_feature_tables() {
  const char* dir = std::getenv("GTDA_OFFICE31_DIR");
  if (dir == nullptr) return std::nullopt;

  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"amazon", "dslr"}, {"amazon", "webcam"}, {"dslr", "amazon"},
      {"dslr", "webcam"}, {"webcam", "amazon"}, {"webcam", "dslr"}};
  nlohmann::json cfg;
  cfg["runs"] = nlohmann::json::array({{{"name", "graph"}, {"method", "gtg"}, {"prior", "none"}},
                                       {{"name", "graph+prior"}, {"method", "gtg"}, {"prior", "lr"}}});
  cfg["tasks"] = nlohmann::json::array();
  for (const auto& [src, dst] : pairs) {
    const std::string base = std::string(dir) + "/";
    cfg["tasks"].push_back({{"name", src.substr(0, 1) + ">" + dst.substr(0, 1)},
                            {"source", base + src + "_features.csv"},
                            {"source_labels", base + src + "_labels.csv"},
                            {"target", base + dst + "_features.csv"},
                            {"target_labels", base + dst + "_labels.csv"}});
  }
  const std::string cfg_path = scratch_file("office31.json");
  testutil::write_file(cfg_path, cfg.dump(2));

  const gtda::TableResult table = gtda::reproduce_table(cfg_path);
  const auto& runs = table.json["runs"];
  if (runs.size() != 2 || runs[0]["avg"].is_null() || runs[1]["avg"].is_null()) {
    fail("table incomplete; are all six domain files present?");
  }
  const double plain_avg = runs[0]["avg"].get<double>();
  const double primed_avg = runs[1]["avg"].get<double>();
  if (std::abs(plain_avg - 0.811) > 0.015) {
    fail("graph-only average " + fmt(plain_avg) + " outside 0.811 +/- 0.015");
  }
  if (std::abs(primed_avg - 0.834) > 0.015) {
    fail("graph+prior average " + fmt(primed_avg) + " outside 0.834 +/- 0.015");
  }
  return "graph avg " + fmt(plain_avg) + ", graph+prior avg " + fmt(primed_avg);
}

// ---------------------------------------------------------------------------

std::string criterion7_cli_determinism() {
  const std::string prefix = scratch_file("c7");
  run_cli("synth --out-prefix " + prefix +
          " --n-per-class 25 --classes 3 --dim 8 --shift 0.8 --noise 0.05 --seed 11");

  const std::string inputs = " --source " + prefix + "_source.csv --source-labels " + prefix +
                             "_source_labels.csv --target " + prefix + "_target.csv" +
                             " --target-labels " + prefix + "_target_labels.csv";
  int compared = 0;
  for (const std::string method : {"gtg", "ls"}) {
    const std::string common = "run" + inputs + " --method " + method +
                               (method == "gtg" ? std::string(" --prior lr") : std::string());
    run_cli(common + " --out-soft " + prefix + "_a_soft.csv --out-hard " + prefix +
            "_a_hard.csv --report " + prefix + "_a.json");
    run_cli(common + " --out-soft " + prefix + "_b_soft.csv --out-hard " + prefix +
            "_b_hard.csv --report " + prefix + "_b.json");
    for (const char* kind : {"_soft.csv", "_hard.csv"}) {
      const std::string a = testutil::read_file(prefix + "_a" + kind);
      const std::string b = testutil::read_file(prefix + "_b" + kind);
      if (a.empty()) fail("prediction file missing for method " + method);
      if (a != b) fail("repeated " + method + " runs differ in " + kind);
      ++compared;
    }
  }
  return std::to_string(compared) + " prediction files byte-compared across repeated runs";
}

// ---------------------------------------------------------------------------

std::string criterion8_graph_contract() {
  testutil::Rng rng(4242);
  constexpr int kSets = 100;
  long long total_edges = 0;
  for (int trial = 0; trial < kSets; ++trial) {
    int n;
    if (trial == 0) {
      n = 10;
    } else if (trial == 1) {
      n = 2000;
    } else {
      n = static_cast<int>(std::lround(std::pow(10.0, rng.uniform(1.0, std::log10(2000.0)))));
      n = std::clamp(n, 10, 2000);
    }
    const int d = rng.uniform_int(3, 12);
    const gtda::Matrix features = testutil::random_features(rng, n, d);
    const gtda::Matrix distances = gtda::pairwise_cosine_distances(features);
    const gtda::Vector scales = gtda::local_scales(distances);
    const gtda::SparseMatrix w = gtda::sparsify(gtda::build_affinity(distances, scales), distances);

    const int k = gtda::knn_count(n);
    const int min_degree = std::min(k, n - 1);
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (int col = 0; col < w.outerSize(); ++col) {
      for (gtda::SparseMatrix::InnerIterator it(w, col); it; ++it) {
        if (it.row() == it.col()) {
          fail("n=" + std::to_string(n) + ": diagonal entry at " + std::to_string(it.row()));
        }
        if (w.coeff(it.col(), it.row()) != it.value()) {
          fail("n=" + std::to_string(n) + ": asymmetric weight at (" +
               std::to_string(it.row()) + "," + std::to_string(it.col()) + ")");
        }
        ++degree[static_cast<std::size_t>(it.row())];
        ++total_edges;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (degree[static_cast<std::size_t>(i)] < min_degree) {
        fail("n=" + std::to_string(n) + ": node " + std::to_string(i) + " has degree " +
             std::to_string(degree[static_cast<std::size_t>(i)]) + " < " +
             std::to_string(min_degree));
      }
    }
  }
  return std::to_string(kSets) + " point sets (n in [10, 2000]), " +
         std::to_string(total_edges) + " directed edges audited";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <cli-binary> <scratch-dir>\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];
  g_scratch = argv[2];
  std::filesystem::create_directories(g_scratch);

  struct Criterion {
    int index;
    const char* title;
    std::function<std::optional<std::string>()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "dynamics property suite", [] { return std::optional(criterion1_property_suite()); }},
      {2, "equilibrium certificate", [] { return std::optional(criterion2_nash_certificate()); }},
      {3, "hand-oracle equivalence", [] { return std::optional(criterion3_hand_oracles()); }},
      {4, "logistic gradient check", [] { return std::optional(criterion4_gradient_check()); }},
      {5, "synthetic shift regression", [] { return std::optional(criterion5_synthetic_regression()); }},
      {6, "user-supplied feature tables", criterion6_feature_tables},
      {7, "CLI determinism", [] { return std::optional(criterion7_cli_determinism()); }},
      {8, "graph contract", [] { return std::optional(criterion8_graph_contract()); }},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    try {
      const std::optional<std::string> detail = criterion.body();
      if (detail) {
        std::printf("[PASS] C%d %s: %s\n", criterion.index, criterion.title, detail->c_str());
      } else {
        std::printf("[SKIP] C%d %s: set GTDA_OFFICE31_DIR to a directory with "
                    "<domain>_features.csv / <domain>_labels.csv for amazon, dslr, webcam\n",
                    criterion.index, criterion.title);
      }
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] C%d %s: %s\n", criterion.index, criterion.title, e.what());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
