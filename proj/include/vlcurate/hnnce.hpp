#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vlcurate/conceptlab.hpp"

namespace vlcurate {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInitialTau = 0.07;
// Upper bound on the logit scale 1/tau.
inline constexpr double kMaxLogitScale = 100.0;

// Learnable temperature stored as log(1/tau); the scale is clamped to
// kMaxLogitScale on every update.
class Temperature {
 public:
  Temperature() : log_scale_(std::log(1.0 / kInitialTau)) {}
  static Temperature from_tau(double tau);

  double log_scale() const { return log_scale_; }
  void set_log_scale(double value);
  double scale() const { return std::exp(log_scale_); }
  double tau() const { return std::exp(-log_scale_); }
  // dL/dlog_scale from dL/dtau.
  double grad_log_scale(double grad_tau) const { return -tau() * grad_tau; }

 private:
  double log_scale_;
};

// n paired image/text embeddings with unit-norm rows.
struct EmbeddingBatch {
  Matrix images;
  Matrix texts;
  double tau = kInitialTau;

  Eigen::Index size() const { return images.rows(); }
};

// Throws InputError unless n >= 2, shapes agree, every row has unit norm
// within `unit_tolerance`, and 1/tau <= kMaxLogitScale.
void validate(const EmbeddingBatch& batch, double unit_tolerance = 1e-6);

struct HnConfig {
  double alpha = 1.0;  // positive-term damping, in (0, 1]
  double beta = 0.0;   // hard-negative concentration, >= 0

  static HnConfig large_noisy() { return {1.0, 0.25}; }
  static HnConfig small_clean() { return {0.999, 0.5}; }
};

void validate(const HnConfig& config);

// How gradients treat the hard-negative weights.
enum class WeightGradient {
  kStop,  // weights are constants of the batch
  kFull,  // differentiate through the weights as well
};

struct LossOptions {
  WeightGradient weight_gradient = WeightGradient::kStop;
  // Skip batch validation; finite-difference probes leave the unit sphere.
  bool check_batch = true;
};

struct LossResult {
  double loss = 0.0;
  Matrix grad_images;
  Matrix grad_texts;
  double grad_tau = 0.0;
};

// S_ij = x_i . t_j / tau
Matrix similarity_matrix(const Matrix& images, const Matrix& texts, double tau);
Matrix similarity_matrix(const EmbeddingBatch& batch);

// Importance weights over in-batch negatives. Row i of image_to_text weights
// the texts j != i for image i; row i of text_to_image weights the images
// j != i for text i. Each row sums to n - 1 over its negatives; diagonals are 0.
struct HardNegativeWeights {
  Matrix image_to_text;
  Matrix text_to_image;
};

HardNegativeWeights hn_weights(const Matrix& similarity, double beta);

LossResult hn_nce_loss(const EmbeddingBatch& batch, const HnConfig& config,
                       const LossOptions& options = {});

// HN-NCE value with caller-supplied weights held fixed.
double hn_nce_loss_fixed_weights(const Matrix& images, const Matrix& texts, double tau,
                                 double alpha, const HardNegativeWeights& weights);

// Symmetric InfoNCE (denominators include the positive pair).
LossResult info_nce_loss(const EmbeddingBatch& batch, const LossOptions& options = {});

// Linear-classifier outputs for one concept head plus their soft labels.
// Rows without a label contribute nothing. Empty logits disable the head.
struct ClassifierTerm {
  Matrix logits;
  std::vector<std::optional<PseudoLabel>> labels;

  bool enabled() const { return logits.size() > 0; }
};

// Summed cross-entropy over labelled rows; `grad` receives d loss / d logits.
double pseudo_label_ce(const ClassifierTerm& term, Eigen::Index n, Matrix& grad);

struct ObjectiveResult {
  double loss = 0.0;
  double contrastive = 0.0;
  double ce_objects = 0.0;
  double ce_attributes = 0.0;
  Matrix grad_images;
  Matrix grad_texts;
  double grad_tau = 0.0;
  Matrix grad_object_logits;
  Matrix grad_attribute_logits;
};

// HN-NCE plus summed pseudo-label cross-entropy for the object and attribute
// heads.
ObjectiveResult total_objective(const EmbeddingBatch& batch, const HnConfig& config,
                                const ClassifierTerm& objects,
                                const ClassifierTerm& attributes,
                                const LossOptions& options = {});

struct ConcentrationRow {
  double beta = 0.0;
  // Largest weight of each row divided by n - 1; image->text rows first.
  std::vector<double> row_fractions;
  double min_fraction = 0.0;
  double mean_fraction = 0.0;
};

// Share of the negative mass given to the hardest negative as beta grows.
std::vector<ConcentrationRow> beta_concentration_probe(const EmbeddingBatch& batch,
                                                       std::span<const double> betas);

}  // namespace vlcurate
