#include "gtda/priors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtda/errors.hpp"
#include "gtda/io.hpp"

namespace gtda {

namespace {

Matrix logits(const Matrix& weights, const Vector& biases, const Matrix& features) {
  Matrix z = features * weights.transpose();
  z.rowwise() += biases.transpose();
  return z;
}

Matrix softmax_rows(Matrix z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double zmax = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - zmax).exp();
    z.row(i) /= z.row(i).sum();
  }
  return z;
}

int argmax_row(const Matrix& m, Eigen::Index i) {
  Eigen::Index best = 0;
  for (Eigen::Index h = 1; h < m.cols(); ++h) {
    if (m(i, h) > m(i, best)) best = h;
  }
  return static_cast<int>(best);
}

// Full-batch gradient descent with Armijo backtracking. Deterministic: the
// iterate sequence depends only on the inputs.
void fit(const Matrix& features, const LabelVector& labels, int classes, double c,
         int max_iters, double tol, Matrix& weights, Vector& biases) {
  const Eigen::Index d = features.cols();
  const double n = std::max<double>(1.0, static_cast<double>(features.rows()));
  weights = Matrix::Zero(classes, d);
  biases = Vector::Zero(classes);
  if (features.rows() == 0) return;

  double value = lr_objective(weights, biases, features, labels, c);
  double step = 1.0;
  Matrix grad_w(classes, d);
  Vector grad_b(classes);
  for (int iter = 0; iter < max_iters; ++iter) {
    lr_gradient(weights, biases, features, labels, c, grad_w, grad_b);
    const double gmax = std::max(grad_w.cwiseAbs().maxCoeff(), grad_b.cwiseAbs().maxCoeff());
    if (gmax <= tol * n) break;

    const double gsq = grad_w.squaredNorm() + grad_b.squaredNorm();
    Matrix w_next;
    Vector b_next;
    double v_next = 0.0;
    bool accepted = false;
    while (step >= 1e-20) {
      w_next = weights - step * grad_w;
      b_next = biases - step * grad_b;
      v_next = lr_objective(w_next, b_next, features, labels, c);
      if (v_next <= value - 1e-4 * step * gsq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    weights = std::move(w_next);
    biases = std::move(b_next);
    value = v_next;
    step = std::min(step * 2.0, 1e6);
  }
}

double fold_accuracy(const Matrix& features, const LabelVector& labels,
                     const std::vector<int>& fold, int train_fold, int classes,
                     double c, const LRConfig& cfg) {
  const Eigen::Index n = features.rows();
  std::vector<Eigen::Index> train_rows, eval_rows;
  for (Eigen::Index i = 0; i < n; ++i) {
    (fold[static_cast<std::size_t>(i)] == train_fold ? train_rows : eval_rows).push_back(i);
  }
  if (eval_rows.empty()) return 0.0;

  Matrix f_train(static_cast<Eigen::Index>(train_rows.size()), features.cols());
  LabelVector y_train(train_rows.size());
  for (std::size_t r = 0; r < train_rows.size(); ++r) {
    f_train.row(static_cast<Eigen::Index>(r)) = features.row(train_rows[r]);
    y_train[r] = labels[static_cast<std::size_t>(train_rows[r])];
  }

  Matrix weights;
  Vector biases;
  fit(f_train, y_train, classes, c, cfg.max_opt_iters, cfg.opt_tol, weights, biases);

  const Matrix z = logits(weights, biases, features);
  int correct = 0;
  for (Eigen::Index i : eval_rows) {
    if (argmax_row(z, i) + 1 == labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(eval_rows.size());
}

}  // namespace

double lr_objective(const Matrix& weights, const Vector& biases,
                    const Matrix& features, const LabelVector& labels, double c) {
  const Matrix z = logits(weights, biases, features);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double zmax = z.row(i).maxCoeff();
    const double lse = std::log((z.row(i).array() - zmax).exp().sum()) + zmax;
    loss += lse - z(i, labels[static_cast<std::size_t>(i)] - 1);
  }
  return loss + weights.squaredNorm() / (2.0 * c);
}

void lr_gradient(const Matrix& weights, const Vector& biases,
                 const Matrix& features, const LabelVector& labels, double c,
                 Matrix& grad_weights, Vector& grad_biases) {
  Matrix residual = softmax_rows(logits(weights, biases, features));
  for (Eigen::Index i = 0; i < residual.rows(); ++i) {
    residual(i, labels[static_cast<std::size_t>(i)] - 1) -= 1.0;
  }
  grad_weights = residual.transpose() * features + weights / c;
  grad_biases = residual.colwise().sum().transpose();
}

LRModel train_lr(const Matrix& features, const LabelVector& labels, const LRConfig& cfg) {
  const Eigen::Index n = features.rows();
  if (n != static_cast<Eigen::Index>(labels.size())) {
    throw DimensionError("train_lr: " + std::to_string(n) + " feature rows vs " +
                         std::to_string(labels.size()) + " labels");
  }
  if (n == 0) throw ConfigError("train_lr: no training data");
  if (cfg.c_grid.empty()) throw ConfigError("train_lr: empty C grid");
  for (double c : cfg.c_grid) {
    if (!(c > 0.0)) throw ConfigError("train_lr: C values must be positive");
  }
  if (cfg.folds != 2) throw ConfigError("train_lr: only 2-fold cross-validation is supported");

  const int classes = num_classes(labels);
  std::vector<int> class_count(static_cast<std::size_t>(classes), 0);
  for (int y : labels) ++class_count[static_cast<std::size_t>(y - 1)];
  for (int cidx = 0; cidx < classes; ++cidx) {
    if (class_count[static_cast<std::size_t>(cidx)] == 0) {
      throw ConfigError("train_lr: class " + std::to_string(cidx + 1) +
                        " has no training observations");
    }
  }

  // Stratified interleaved split: within each class, even-positioned rows go
  // to fold 0 and odd-positioned rows to fold 1. When some class cannot reach
  // both folds, fall back to plain interleaved halves over all rows.
  const bool stratified = std::all_of(class_count.begin(), class_count.end(),
                                      [](int count) { return count >= 2; });
  std::vector<int> fold(static_cast<std::size_t>(n));
  if (stratified) {
    std::vector<int> seen(static_cast<std::size_t>(classes), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::size_t cidx = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)] - 1);
      fold[static_cast<std::size_t>(i)] = seen[cidx] % 2;
      ++seen[cidx];
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) fold[static_cast<std::size_t>(i)] = i % 2;
  }

  double best_c = cfg.c_grid.front();
  double best_acc = -1.0;
  for (double c : cfg.c_grid) {
    const double acc = 0.5 * (fold_accuracy(features, labels, fold, 0, classes, c, cfg) +
                              fold_accuracy(features, labels, fold, 1, classes, c, cfg));
    if (acc > best_acc || (acc == best_acc && c < best_c)) {
      best_acc = acc;
      best_c = c;
    }
  }

  LRModel model;
  model.classes = classes;
  model.selected_c = best_c;
  fit(features, labels, classes, best_c, cfg.max_opt_iters, cfg.opt_tol, model.weights,
      model.biases);
  return model;
}

Matrix predict_proba(const LRModel& model, const Matrix& features) {
  if (features.cols() != model.weights.cols()) {
    throw DimensionError("predict_proba: features have " + std::to_string(features.cols()) +
                         " columns, model expects " + std::to_string(model.weights.cols()));
  }
  return softmax_rows(logits(model.weights, model.biases, features));
}

void save_lr_model(const LRModel& model, const std::string& path) {
  nlohmann::json doc;
  doc["classes"] = model.classes;
  doc["dim"] = model.weights.cols();
  doc["selected_C"] = model.selected_c;
  std::vector<double> w(static_cast<std::size_t>(model.weights.size()));
  for (Eigen::Index i = 0; i < model.weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.weights.cols(); ++j) {
      w[static_cast<std::size_t>(i * model.weights.cols() + j)] = model.weights(i, j);
    }
  }
  doc["weights"] = w;
  doc["biases"] = std::vector<double>(model.biases.data(), model.biases.data() + model.biases.size());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << doc.dump(2) << '\n';
}

LRModel load_lr_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }

  LRModel model;
  try {
    model.classes = doc.at("classes").get<int>();
    const Eigen::Index d = doc.at("dim").get<Eigen::Index>();
    model.selected_c = doc.at("selected_C").get<double>();
    const auto w = doc.at("weights").get<std::vector<double>>();
    const auto b = doc.at("biases").get<std::vector<double>>();
    if (model.classes < 1 || d < 1 ||
        static_cast<Eigen::Index>(w.size()) != model.classes * d ||
        static_cast<Eigen::Index>(b.size()) != model.classes) {
      throw DataError("model JSON has inconsistent shapes: " + path);
    }
    model.weights.resize(model.classes, d);
    for (Eigen::Index i = 0; i < model.classes; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        model.weights(i, j) = w[static_cast<std::size_t>(i * d + j)];
      }
    }
    model.biases = Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(b.size()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }
  return model;
}

}  // namespace gtda
