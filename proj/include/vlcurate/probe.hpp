#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "vlcurate/hnnce.hpp"

namespace vlcurate {

// Few-shot classification problem around a prompt-derived classifier.
struct ProbeProblem {
  Matrix features;                // n x d
  std::vector<std::size_t> labels;  // n entries in [0, n_c)
  Matrix prompt_weights;          // W0, d x n_c
  double delta = 0.0;             // radius for the weight offset
  double delta_bias = 0.0;        // radius for the bias

  Eigen::Index num_classes() const { return prompt_weights.cols(); }
};

void validate(const ProbeProblem& problem);

// Scales `m` onto the Frobenius (Euclidean for vectors) ball of `radius`
// when it lies outside. Throws InputError for a negative radius.
Matrix project_l2(const Matrix& m, double radius);
Vector project_l2(const Vector& v, double radius);

// W0 from unit-norm class prompt embeddings (n_c x d): the transpose, so
// logits are cosine scores for unit-norm features.
Matrix zero_shot_init(const Matrix& prompt_embeddings);

struct ProbeOptions {
  double step_size = 0.1;
  std::size_t iterations = 100;
  std::size_t batch_size = 0;  // 0 = full batch
  bool cosine_decay = false;
  std::uint64_t seed = 0;
};

struct ProbeIterate {
  double loss = 0.0;  // full-data mean cross-entropy at this iterate
  double weight_norm = 0.0;
  double bias_norm = 0.0;
};

struct ProbeSolution {
  Matrix weights;  // offset W, d x n_c
  Vector bias;     // n_c
  // Entry 0 is the starting point (W = 0, b = 0); entry t follows update t.
  std::vector<ProbeIterate> trajectory;
};

class ProbeDivergence : public std::runtime_error {
 public:
  ProbeDivergence(std::size_t iteration, double loss);
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

// Projected gradient descent on the mean cross-entropy of
// x^T (W + W0) + b with ||W||_F <= delta and ||b||_2 <= delta_bias.
ProbeSolution pgd_fit(const ProbeProblem& problem, const ProbeOptions& options);

// n x n_c logits for the given offset weights and bias.
Matrix probe_logits(const Matrix& features, const Matrix& prompt_weights,
                    const Matrix& weights, const Vector& bias);

// Mean cross-entropy of `logits` against `labels`.
double mean_cross_entropy(const Matrix& logits, std::span<const std::size_t> labels);

std::vector<std::size_t> predict(const Matrix& logits);
double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> labels);

struct GridPoint {
  double delta = 0.0;
  double delta_bias = 0.0;
  double train_loss = 0.0;
  double eval_accuracy = 0.0;
};

// Fits every (delta, delta_bias) pair on `problem`, scoring each on the
// evaluation split. Fits run concurrently, one state per grid point; the
// result keeps grid order.
std::vector<GridPoint> grid_search(const ProbeProblem& problem, const ProbeOptions& options,
                                   std::span<const double> deltas,
                                   std::span<const double> delta_biases,
                                   const Matrix& eval_features,
                                   std::span<const std::size_t> eval_labels,
                                   std::size_t threads = 1);

}  // namespace vlcurate
