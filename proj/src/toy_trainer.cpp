#include "vlcurate/toy_trainer.hpp"

#include <cmath>
#include <cstdio>

namespace vlcurate {

namespace {

struct Encoded {
  Matrix raw;     // before normalization
  Matrix unit;    // unit rows
  Vector norms;
};

Encoded encode(const Matrix& inputs, const Matrix& weights) {
  Encoded e;
  e.raw = inputs * weights.transpose();
  e.norms = e.raw.rowwise().norm();
  e.unit = e.raw.array().colwise() / e.norms.array();
  return e;
}

// d loss / d raw rows given d loss / d unit rows.
Matrix through_normalization(const Encoded& e, const Matrix& grad_unit) {
  const Vector radial = (grad_unit.array() * e.unit.array()).rowwise().sum();
  Matrix g = grad_unit - (e.unit.array().colwise() * radial.array()).matrix();
  return g.array().colwise() / e.norms.array();
}

std::vector<std::optional<PseudoLabel>> teacher_labels(const std::vector<std::size_t>& ids,
                                                       std::size_t classes, std::size_t k,
                                                       Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::optional<PseudoLabel>> labels;
  labels.reserve(ids.size());
  for (std::size_t id : ids) {
    std::vector<double> logits(classes);
    for (std::size_t c = 0; c < classes; ++c) logits[c] = normal(rng) + (c == id ? 4.0 : 0.0);
    double peak = logits[0];
    for (double v : logits) peak = std::max(peak, v);
    double z = 0.0;
    for (double& v : logits) z += (v = std::exp(v - peak));
    for (double& v : logits) v /= z;
    labels.emplace_back(topk_sparsify(logits, static_cast<std::int64_t>(k)));
  }
  return labels;
}

}  // namespace

std::string ToyRunConfig::name() const {
  std::string out = loss == ContrastiveLoss::kInfoNce ? "infonce" : "hnnce";
  if (loss == ContrastiveLoss::kHnNce) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(a=%g,b=%g)", hn.alpha, hn.beta);
    out += buf;
  }
  out += concept_terms ? "+cd" : "";
  return out;
}

double recall_at_1(const Matrix& scores) {
  std::size_t hits = 0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    scores.row(i).maxCoeff(&best);
    hits += best == i;
  }
  return scores.rows() == 0 ? 0.0
                            : static_cast<double>(hits) / static_cast<double>(scores.rows());
}

ToyRunResult train_toy(const SyntheticPairSpec& spec, const ToyRunConfig& config) {
  validate(spec);
  validate(config.hn);
  if (!(config.learning_rate > 0.0) || !(config.tau_learning_rate >= 0.0)) {
    throw InputError("learning rates must be positive");
  }
  if (config.top_k == 0) throw InputError("top-k must be >= 1");

  Rng rng(config.seed);
  const SyntheticWorld world(spec, rng);
  const SyntheticPairs train = world.sample(spec.train_pairs, rng);
  const SyntheticPairs test = world.sample(spec.test_pairs, rng);

  std::vector<std::size_t> train_attrs(train.concepts.size());
  for (std::size_t i = 0; i < train_attrs.size(); ++i) {
    train_attrs[i] = train.concepts[i] % spec.n_attributes;
  }
  const auto obj_labels = teacher_labels(train.concepts, spec.n_concepts, config.top_k, rng);
  const auto attr_labels = teacher_labels(train_attrs, spec.n_attributes, config.top_k, rng);

  const auto d = static_cast<Eigen::Index>(spec.d);
  const auto in = static_cast<Eigen::Index>(spec.input_dim);
  const double init_scale = 1.0 / std::sqrt(static_cast<double>(in));
  Matrix image_weights = random_gaussian(d, in, init_scale, rng);
  Matrix text_weights = random_gaussian(d, in, init_scale, rng);
  Matrix obj_head = Matrix::Zero(static_cast<Eigen::Index>(spec.n_concepts), d);
  Matrix attr_head = Matrix::Zero(static_cast<Eigen::Index>(spec.n_attributes), d);
  Temperature temperature = Temperature::from_tau(config.initial_tau);

  const double n = static_cast<double>(spec.train_pairs);
  ToyRunResult result;
  result.name = config.name();
  auto diverged = [&](std::size_t step) {
    return TrainingDivergence("training diverged for " + result.name + " at step " +
                              std::to_string(step));
  };
  for (std::size_t step = 0; step < config.steps; ++step) {
    const Encoded img = encode(train.image_inputs, image_weights);
    const Encoded txt = encode(train.text_inputs, text_weights);
    if (!img.norms.allFinite() || !txt.norms.allFinite() || img.norms.minCoeff() <= 0.0 ||
        txt.norms.minCoeff() <= 0.0 || !std::isfinite(temperature.log_scale())) {
      throw diverged(step);
    }
    const EmbeddingBatch batch{img.unit, txt.unit, temperature.tau()};

    LossResult contrastive = config.loss == ContrastiveLoss::kInfoNce
                                 ? info_nce_loss(batch)
                                 : hn_nce_loss(batch, config.hn);
    double loss = contrastive.loss;
    Matrix grad_images = contrastive.grad_images;
    if (config.concept_terms) {
      Matrix grad_obj;
      Matrix grad_attr;
      loss += pseudo_label_ce({img.unit * obj_head.transpose(), obj_labels},
                              batch.size(), grad_obj);
      loss += pseudo_label_ce({img.unit * attr_head.transpose(), attr_labels},
                              batch.size(), grad_attr);
      grad_images += grad_obj * obj_head + grad_attr * attr_head;
      obj_head -= config.learning_rate / n * (grad_obj.transpose() * img.unit);
      attr_head -= config.learning_rate / n * (grad_attr.transpose() * img.unit);
    }
    if (!std::isfinite(loss)) throw diverged(step);
    result.curve.push_back({loss / n, temperature.tau()});

    image_weights -= config.learning_rate / n *
                     (through_normalization(img, grad_images).transpose() * train.image_inputs);
    text_weights -=
        config.learning_rate / n *
        (through_normalization(txt, contrastive.grad_texts).transpose() * train.text_inputs);
    temperature.set_log_scale(temperature.log_scale() -
                              config.tau_learning_rate / n *
                                  temperature.grad_log_scale(contrastive.grad_tau));
  }

  const Encoded img = encode(test.image_inputs, image_weights);
  const Encoded txt = encode(test.text_inputs, text_weights);
  const Matrix scores = img.unit * txt.unit.transpose();
  result.recall_i2t = recall_at_1(scores);
  result.recall_t2i = recall_at_1(scores.transpose());
  result.final_loss = result.curve.empty() ? 0.0 : result.curve.back().loss;
  result.final_tau = temperature.tau();
  return result;
}

}  // namespace vlcurate
