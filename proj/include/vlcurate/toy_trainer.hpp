#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vlcurate/hnnce.hpp"
#include "vlcurate/synthetic.hpp"

namespace vlcurate {

enum class ContrastiveLoss { kInfoNce, kHnNce };

struct ToyRunConfig {
  ContrastiveLoss loss = ContrastiveLoss::kHnNce;
  HnConfig hn = HnConfig::large_noisy();
  bool concept_terms = true;  // add the object/attribute pseudo-label CE
  std::size_t top_k = kDefaultTopK;
  std::size_t steps = 200;
  double learning_rate = 0.05;
  double tau_learning_rate = 0.01;
  double initial_tau = kInitialTau;
  std::uint64_t seed = 0;

  std::string name() const;
};

struct ToyStep {
  double loss = 0.0;  // mean objective per pair before the update
  double tau = 0.0;
};

struct ToyRunResult {
  std::string name;
  std::vector<ToyStep> curve;
  double final_loss = 0.0;
  double recall_i2t = 0.0;  // R@1 on the held-out split
  double recall_t2i = 0.0;
  double final_tau = 0.0;
};

class TrainingDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Trains linear image/text encoders (plus linear concept heads when enabled)
// by full-batch gradient descent on the training split. Data and parameters
// depend only on `spec` and `config.seed`.
ToyRunResult train_toy(const SyntheticPairSpec& spec, const ToyRunConfig& config);

// Fraction of rows whose highest-scoring column is the matching index.
double recall_at_1(const Matrix& scores);

}  // namespace vlcurate
