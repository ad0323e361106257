#include "vlcurate/probe.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace vlcurate {

namespace {

// Mean cross-entropy and its gradient with respect to the logits.
double softmax_ce(const Matrix& logits, std::span<const std::size_t> labels,
                  std::span<const std::size_t> rows, Matrix* grad) {
  const double count = static_cast<double>(rows.size());
  double loss = 0.0;
  if (grad) *grad = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), logits.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(rows[r]);
    const double peak = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - peak).exp().matrix();
    const double z = e.sum();
    const auto y = static_cast<Eigen::Index>(labels[rows[r]]);
    loss += peak + std::log(z) - logits(i, y);
    if (grad) {
      grad->row(static_cast<Eigen::Index>(r)) = e / z / count;
      (*grad)(static_cast<Eigen::Index>(r), y) -= 1.0 / count;
    }
  }
  return loss / count;
}

}  // namespace

ProbeDivergence::ProbeDivergence(std::size_t iteration, double loss)
    : std::runtime_error("probe loss became non-finite (" + std::to_string(loss) +
                         ") at iteration " + std::to_string(iteration)),
      iteration_(iteration) {}

void validate(const ProbeProblem& problem) {
  const Eigen::Index n = problem.features.rows();
  if (problem.prompt_weights.rows() != problem.features.cols()) {
    throw InputError("prompt weights must have one row per feature dimension");
  }
  if (problem.num_classes() < 2) throw InputError("probe needs at least two classes");
  if (static_cast<Eigen::Index>(problem.labels.size()) != n || n == 0) {
    throw InputError("probe needs one label per feature row");
  }
  for (std::size_t y : problem.labels) {
    if (static_cast<Eigen::Index>(y) >= problem.num_classes()) {
      throw InputError("label " + std::to_string(y) + " outside the class range");
    }
  }
  if (!(problem.delta >= 0.0) || !(problem.delta_bias >= 0.0)) {
    throw InputError("probe radii must be non-negative");
  }
  if (!problem.features.allFinite() || !problem.prompt_weights.allFinite()) {
    throw InputError("probe inputs must be finite");
  }
}

Matrix project_l2(const Matrix& m, double radius) {
  if (!(radius >= 0.0)) throw InputError("projection radius must be non-negative");
  const double norm = m.norm();
  if (norm <= radius) return m;
  return m * (radius / norm);
}

Vector project_l2(const Vector& v, double radius) {
  return project_l2(Matrix(v), radius).col(0);
}

Matrix zero_shot_init(const Matrix& prompt_embeddings) {
  for (Eigen::Index i = 0; i < prompt_embeddings.rows(); ++i) {
    if (std::abs(prompt_embeddings.row(i).norm() - 1.0) > 1e-6) {
      throw InputError("prompt embedding " + std::to_string(i) + " is not unit norm");
    }
  }
  return prompt_embeddings.transpose();
}

Matrix probe_logits(const Matrix& features, const Matrix& prompt_weights,
                    const Matrix& weights, const Vector& bias) {
  Matrix logits = features * (weights + prompt_weights);
  logits.rowwise() += bias.transpose();
  return logits;
}

double mean_cross_entropy(const Matrix& logits, std::span<const std::size_t> labels) {
  std::vector<std::size_t> rows(labels.size());
  std::iota(rows.begin(), rows.end(), 0);
  return softmax_ce(logits, labels, rows, nullptr);
}

std::vector<std::size_t> predict(const Matrix& logits) {
  std::vector<std::size_t> out(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index best = 0;
    logits.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return out;
}

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> labels) {
  if (predicted.size() != labels.size()) throw InputError("prediction/label size mismatch");
  if (labels.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predicted[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

ProbeSolution pgd_fit(const ProbeProblem& problem, const ProbeOptions& options) {
  validate(problem);
  if (!(options.step_size > 0.0)) throw InputError("step size must be positive");
  const Eigen::Index d = problem.features.cols();
  const Eigen::Index classes = problem.num_classes();
  const std::size_t n = problem.labels.size();

  ProbeSolution sol;
  sol.weights = Matrix::Zero(d, classes);
  sol.bias = Vector::Zero(classes);

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  const bool full_batch = options.batch_size == 0 || options.batch_size >= n;
  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order = all;
  std::size_t cursor = n;

  auto record = [&](std::size_t iteration) {
    const double loss = mean_cross_entropy(
        probe_logits(problem.features, problem.prompt_weights, sol.weights, sol.bias),
        problem.labels);
    if (!std::isfinite(loss)) throw ProbeDivergence(iteration, loss);
    sol.trajectory.push_back({loss, sol.weights.norm(), sol.bias.norm()});
  };
  record(0);

  std::vector<std::size_t> batch;
  for (std::size_t t = 1; t <= options.iterations; ++t) {
    if (full_batch) {
      batch = all;
    } else {
      batch.clear();
      while (batch.size() < options.batch_size) {
        if (cursor == n) {
          std::shuffle(order.begin(), order.end(), rng);
          cursor = 0;
        }
        batch.push_back(order[cursor++]);
      }
    }
    Matrix rows(static_cast<Eigen::Index>(batch.size()), d);
    for (std::size_t r = 0; r < batch.size(); ++r) {
      rows.row(static_cast<Eigen::Index>(r)) =
          problem.features.row(static_cast<Eigen::Index>(batch[r]));
    }
    std::vector<std::size_t> batch_labels(batch.size());
    for (std::size_t r = 0; r < batch.size(); ++r) batch_labels[r] = problem.labels[batch[r]];
    std::vector<std::size_t> local(batch.size());
    std::iota(local.begin(), local.end(), 0);

    Matrix grad_logits;
    softmax_ce(probe_logits(rows, problem.prompt_weights, sol.weights, sol.bias),
               batch_labels, local, &grad_logits);
    const Matrix grad_w = rows.transpose() * grad_logits;
    const Vector grad_b = grad_logits.colwise().sum().transpose();

    double step = options.step_size;
    if (options.cosine_decay) {
      step *= 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(t - 1) /
                                    static_cast<double>(options.iterations)));
    }
    sol.weights = project_l2(Matrix(sol.weights - step * grad_w), problem.delta);
    sol.bias = project_l2(Vector(sol.bias - step * grad_b), problem.delta_bias);
    record(t);
  }
  return sol;
}

std::vector<GridPoint> grid_search(const ProbeProblem& problem, const ProbeOptions& options,
                                   std::span<const double> deltas,
                                   std::span<const double> delta_biases,
                                   const Matrix& eval_features,
                                   std::span<const std::size_t> eval_labels,
                                   std::size_t threads) {
  std::vector<GridPoint> grid;
  for (double d : deltas) {
    for (double db : delta_biases) grid.push_back({d, db, 0.0, 0.0});
  }
  auto fit_one = [&](GridPoint& point) {
    ProbeProblem local = problem;
    local.delta = point.delta;
    local.delta_bias = point.delta_bias;
    const ProbeSolution sol = pgd_fit(local, options);
    point.train_loss = sol.trajectory.back().loss;
    point.eval_accuracy = accuracy(
        predict(probe_logits(eval_features, problem.prompt_weights, sol.weights, sol.bias)),
        eval_labels);
  };
  const std::size_t workers = std::max<std::size_t>(1, threads);
  for (std::size_t start = 0; start < grid.size(); start += workers) {
    std::vector<std::future<void>> running;
    for (std::size_t i = start; i < std::min(grid.size(), start + workers); ++i) {
      running.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async,
                                   fit_one, std::ref(grid[i])));
    }
    for (auto& f : running) f.get();
  }
  return grid;
}

}  // namespace vlcurate
