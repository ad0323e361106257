#include "vlcurate/hnnce.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace vlcurate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum exp(v)) over entries of row `i` of `m`, skipping column `skip`.
double row_lse(const Matrix& m, Eigen::Index i, double scale, Eigen::Index skip) {
  double peak = kNegInf;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j != skip) peak = std::max(peak, scale * m(i, j));
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j != skip) sum += std::exp(scale * m(i, j) - peak);
  }
  return peak + std::log(sum);
}

// log of the normalized weights (n-1) * softmax_{j != i}(beta * S_ij).
Matrix log_weights(const Matrix& s, double beta) {
  const Eigen::Index n = s.rows();
  const double log_negatives = std::log(static_cast<double>(n - 1));
  Matrix out = Matrix::Constant(n, n, kNegInf);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lse = row_lse(s, i, beta, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) out(i, j) = log_negatives + beta * s(i, j) - lse;
    }
  }
  return out;
}

struct DirectionTerm {
  double loss = 0.0;
  Matrix grad;  // d loss / d S for this direction, in the layout of `s`
};

// One direction of HN-NCE treating row i of `s` as anchor i: positive on the
// diagonal, negatives elsewhere in the row.
DirectionTerm hn_direction(const Matrix& s, double alpha, double beta, bool full) {
  const Eigen::Index n = s.rows();
  const Matrix logw = log_weights(s, beta);
  const double log_alpha = std::log(alpha);
  DirectionTerm out;
  out.grad = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double peak = log_alpha + s(i, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) peak = std::max(peak, s(i, j) + logw(i, j));
    }
    double sum = std::exp(log_alpha + s(i, i) - peak);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) sum += std::exp(s(i, j) + logw(i, j) - peak);
    }
    const double log_denom = peak + std::log(sum);
    out.loss += log_denom - s(i, i);

    double negative_share = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) {
        out.grad(i, j) = std::exp(log_alpha + s(i, i) - log_denom) - 1.0;
      } else {
        const double p = std::exp(s(i, j) + logw(i, j) - log_denom);
        out.grad(i, j) = p;
        negative_share += p;
      }
    }
    if (full && beta != 0.0) {
      // d w_ij / d S_ik = beta * w_ij * (delta_jk - q_ik), q = w / (n - 1).
      const double log_negatives = std::log(static_cast<double>(n - 1));
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i) continue;
        const double q = std::exp(logw(i, k) - log_negatives);
        out.grad(i, k) += beta * (out.grad(i, k) - q * negative_share);
      }
    }
  }
  return out;
}

LossResult chain_to_embeddings(const Matrix& images, const Matrix& texts, double tau,
                               const Matrix& s, const Matrix& grad_s, double loss) {
  LossResult r;
  r.loss = loss;
  r.grad_images = grad_s * texts / tau;
  r.grad_texts = grad_s.transpose() * images / tau;
  r.grad_tau = -(grad_s.array() * s.array()).sum() / tau;
  return r;
}

void check_finite(const LossResult& r, const char* what) {
  if (!std::isfinite(r.loss) || !r.grad_images.allFinite() || !r.grad_texts.allFinite() ||
      !std::isfinite(r.grad_tau)) {
    throw InputError(std::string(what) + " produced a non-finite value");
  }
}

}  // namespace

Temperature Temperature::from_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InputError("tau must be positive");
  Temperature t;
  t.set_log_scale(-std::log(tau));
  return t;
}

void Temperature::set_log_scale(double value) {
  if (!std::isfinite(value)) throw InputError("temperature update is not finite");
  log_scale_ = std::min(value, std::log(kMaxLogitScale));
}

void validate(const EmbeddingBatch& batch, double unit_tolerance) {
  const Eigen::Index n = batch.images.rows();
  if (n < 2) throw InputError("batch needs at least two pairs (no negatives otherwise)");
  if (batch.texts.rows() != n || batch.texts.cols() != batch.images.cols()) {
    throw InputError("image and text embeddings must have the same shape");
  }
  if (!(batch.tau > 0.0) || 1.0 / batch.tau > kMaxLogitScale * (1.0 + 1e-12)) {
    throw InputError("tau must satisfy 1/tau <= " + std::to_string(kMaxLogitScale));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(batch.images.row(i).norm() - 1.0) > unit_tolerance) {
      throw InputError("image embedding " + std::to_string(i) + " is not unit norm");
    }
    if (std::abs(batch.texts.row(i).norm() - 1.0) > unit_tolerance) {
      throw InputError("text embedding " + std::to_string(i) + " is not unit norm");
    }
  }
}

void validate(const HnConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
    throw InputError("alpha must lie in (0, 1]");
  }
  if (!(config.beta >= 0.0) || !std::isfinite(config.beta)) {
    throw InputError("beta must be >= 0");
  }
}

Matrix similarity_matrix(const Matrix& images, const Matrix& texts, double tau) {
  return images * texts.transpose() / tau;
}

Matrix similarity_matrix(const EmbeddingBatch& batch) {
  return similarity_matrix(batch.images, batch.texts, batch.tau);
}

HardNegativeWeights hn_weights(const Matrix& similarity, double beta) {
  if (similarity.rows() < 2 || similarity.rows() != similarity.cols()) {
    throw InputError("hard-negative weights need a square similarity matrix, n >= 2");
  }
  HardNegativeWeights w;
  w.image_to_text = log_weights(similarity, beta).array().exp().matrix();
  w.text_to_image = log_weights(similarity.transpose(), beta).array().exp().matrix();
  // Vectorized exp does not map -inf to exactly 0.
  w.image_to_text.diagonal().setZero();
  w.text_to_image.diagonal().setZero();
  return w;
}

LossResult hn_nce_loss(const EmbeddingBatch& batch, const HnConfig& config,
                       const LossOptions& options) {
  validate(config);
  if (options.check_batch) validate(batch);
  if (batch.images.rows() < 2) throw InputError("batch needs at least two pairs");
  const bool full = options.weight_gradient == WeightGradient::kFull;
  const Matrix s = similarity_matrix(batch);
  const DirectionTerm i2t = hn_direction(s, config.alpha, config.beta, full);
  const DirectionTerm t2i = hn_direction(s.transpose(), config.alpha, config.beta, full);
  const Matrix grad_s = i2t.grad + t2i.grad.transpose();
  LossResult r = chain_to_embeddings(batch.images, batch.texts, batch.tau, s, grad_s,
                                     i2t.loss + t2i.loss);
  check_finite(r, "HN-NCE");
  return r;
}

double hn_nce_loss_fixed_weights(const Matrix& images, const Matrix& texts, double tau,
                                 double alpha, const HardNegativeWeights& weights) {
  const Matrix s = similarity_matrix(images, texts, tau);
  const Eigen::Index n = s.rows();
  auto direction = [&](const Matrix& m, const Matrix& w) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double peak = std::log(alpha) + m(i, i);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i && w(i, j) > 0.0) peak = std::max(peak, m(i, j) + std::log(w(i, j)));
      }
      double sum = std::exp(std::log(alpha) + m(i, i) - peak);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i && w(i, j) > 0.0) sum += std::exp(m(i, j) + std::log(w(i, j)) - peak);
      }
      loss += peak + std::log(sum) - m(i, i);
    }
    return loss;
  };
  return direction(s, weights.image_to_text) +
         direction(s.transpose(), weights.text_to_image);
}

LossResult info_nce_loss(const EmbeddingBatch& batch, const LossOptions& options) {
  if (options.check_batch) validate(batch);
  if (batch.images.rows() < 2) throw InputError("batch needs at least two pairs");
  const Matrix s = similarity_matrix(batch);
  const Eigen::Index n = s.rows();
  Matrix grad_s = Matrix::Zero(n, n);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row = s.row(i).maxCoeff() +
                       std::log((s.row(i).array() - s.row(i).maxCoeff()).exp().sum());
    const double col = s.col(i).maxCoeff() +
                       std::log((s.col(i).array() - s.col(i).maxCoeff()).exp().sum());
    loss += (row - s(i, i)) + (col - s(i, i));
    grad_s.row(i) += (s.row(i).array() - row).exp().matrix();
    grad_s.col(i) += (s.col(i).array() - col).exp().matrix();
    grad_s(i, i) -= 2.0;
  }
  LossResult r = chain_to_embeddings(batch.images, batch.texts, batch.tau, s, grad_s, loss);
  check_finite(r, "InfoNCE");
  return r;
}

double pseudo_label_ce(const ClassifierTerm& term, Eigen::Index n, Matrix& grad) {
  grad = Matrix::Zero(term.logits.rows(), term.logits.cols());
  if (!term.enabled()) return 0.0;
  if (term.logits.rows() != n || static_cast<Eigen::Index>(term.labels.size()) != n) {
    throw InputError("classifier logits and labels must have one row per pair");
  }
  double loss = 0.0;
  std::vector<double> row(static_cast<std::size_t>(term.logits.cols()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& label = term.labels[static_cast<std::size_t>(i)];
    if (!label || label->entries.empty()) continue;
    for (Eigen::Index j = 0; j < term.logits.cols(); ++j) {
      row[static_cast<std::size_t>(j)] = term.logits(i, j);
    }
    const CeResult ce = ce_pseudo_loss(row, *label);
    loss += ce.loss;
    for (Eigen::Index j = 0; j < term.logits.cols(); ++j) {
      grad(i, j) = ce.grad[static_cast<std::size_t>(j)];
    }
  }
  return loss;
}

ObjectiveResult total_objective(const EmbeddingBatch& batch, const HnConfig& config,
                                const ClassifierTerm& objects,
                                const ClassifierTerm& attributes,
                                const LossOptions& options) {
  const LossResult hn = hn_nce_loss(batch, config, options);
  ObjectiveResult r;
  r.contrastive = hn.loss;
  r.grad_images = hn.grad_images;
  r.grad_texts = hn.grad_texts;
  r.grad_tau = hn.grad_tau;
  r.ce_objects = pseudo_label_ce(objects, batch.size(), r.grad_object_logits);
  r.ce_attributes = pseudo_label_ce(attributes, batch.size(), r.grad_attribute_logits);
  r.loss = r.contrastive + r.ce_objects + r.ce_attributes;
  return r;
}

std::vector<ConcentrationRow> beta_concentration_probe(const EmbeddingBatch& batch,
                                                       std::span<const double> betas) {
  validate(batch);
  const Matrix s = similarity_matrix(batch);
  const double negatives = static_cast<double>(s.rows() - 1);
  std::vector<ConcentrationRow> table;
  for (double beta : betas) {
    if (!(beta >= 0.0)) throw InputError("beta must be >= 0");
    const HardNegativeWeights w = hn_weights(s, beta);
    ConcentrationRow row;
    row.beta = beta;
    for (const Matrix* m : {&w.image_to_text, &w.text_to_image}) {
      for (Eigen::Index i = 0; i < m->rows(); ++i) {
        row.row_fractions.push_back(m->row(i).maxCoeff() / negatives);
      }
    }
    row.min_fraction = *std::min_element(row.row_fractions.begin(), row.row_fractions.end());
    double sum = 0.0;
    for (double f : row.row_fractions) sum += f;
    row.mean_fraction = sum / static_cast<double>(row.row_fractions.size());
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace vlcurate
