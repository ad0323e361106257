#include "vlcurate/synthetic.hpp"

#include <string>

namespace vlcurate {

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
  std::normal_distribution<double> normal(0.0, stddev);
  Matrix m(rows, cols);
  // Row-major fill so the draw order does not depend on Eigen's storage.
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

Matrix random_unit_rows(Eigen::Index n, Eigen::Index d, Rng& rng) {
  Matrix m = random_gaussian(n, d, 1.0, rng);
  m.rowwise().normalize();
  return m;
}

void validate(const SyntheticPairSpec& spec) {
  if (spec.d < 2) throw InputError("embedding dimension must be >= 2");
  if (spec.n_concepts < 2 || spec.n_attributes < 1 || spec.input_dim < 1) {
    throw InputError("synthetic spec needs >= 2 concepts, >= 1 attribute and inputs");
  }
  if (!(spec.alignment >= 0.0 && spec.alignment <= 1.0)) {
    throw InputError("alignment strength must lie in [0, 1]");
  }
  if (!(spec.duplicate_rate >= 0.0 && spec.duplicate_rate <= 1.0)) {
    throw InputError("duplicate rate must lie in [0, 1]");
  }
  if (!(spec.noise >= 0.0)) throw InputError("noise scale must be >= 0");
  if (spec.train_pairs < 2 || spec.test_pairs < 2) {
    throw InputError("each split needs at least two pairs");
  }
}

SyntheticWorld::SyntheticWorld(const SyntheticPairSpec& spec, Rng& rng) : spec_(spec) {
  validate(spec);
  const auto concepts = static_cast<Eigen::Index>(spec.n_concepts);
  const auto in = static_cast<Eigen::Index>(spec.input_dim);
  image_prototypes_ = random_gaussian(concepts, in, 1.0, rng);
  text_prototypes_ = random_gaussian(concepts, in, 1.0, rng);
  instance_map_ = random_gaussian(in, in, 1.0 / std::sqrt(static_cast<double>(in)), rng);
}

SyntheticPairs SyntheticWorld::sample(std::size_t n, Rng& rng) const {
  const auto in = static_cast<Eigen::Index>(spec_.input_dim);
  std::uniform_int_distribution<std::size_t> pick(0, spec_.n_concepts - 1);
  std::bernoulli_distribution duplicate(spec_.duplicate_rate);
  SyntheticPairs out;
  out.concepts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool dup = i > 0 && duplicate(rng);
    out.concepts[i] = dup ? out.concepts[i - 1] : pick(rng);
  }
  const auto rows = static_cast<Eigen::Index>(n);
  const Matrix instance = random_gaussian(rows, in, 1.0, rng);
  const Matrix image_noise = random_gaussian(rows, in, spec_.noise, rng);
  const Matrix text_noise = random_gaussian(rows, in, spec_.noise, rng);
  out.image_inputs.resize(rows, in);
  out.text_inputs.resize(rows, in);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto c = static_cast<Eigen::Index>(out.concepts[static_cast<std::size_t>(i)]);
    out.image_inputs.row(i) = image_prototypes_.row(c) +
                              spec_.alignment * instance.row(i) + image_noise.row(i);
    out.text_inputs.row(i) = text_prototypes_.row(c) +
                             spec_.alignment * instance.row(i) * instance_map_.transpose() +
                             text_noise.row(i);
  }
  return out;
}

}  // namespace vlcurate
