#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "vlcurate/hnnce.hpp"

namespace vlcurate {

using Rng = std::mt19937_64;

// n x d matrix of Gaussian rows scaled to unit norm.
Matrix random_unit_rows(Eigen::Index n, Eigen::Index d, Rng& rng);
Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng);

// Planted-alignment stand-in for image-text pairs. Each pair draws a concept;
// its image and text inputs share the concept prototype plus an
// instance-level factor whose weight is `alignment`.
struct SyntheticPairSpec {
  std::size_t n_concepts = 8;
  std::size_t n_attributes = 4;
  std::size_t input_dim = 16;
  std::size_t d = 8;  // embedding dimension
  double noise = 0.3;
  double alignment = 0.8;       // in [0, 1]
  double duplicate_rate = 0.1;  // chance a pair repeats the previous concept
  std::size_t train_pairs = 64;
  std::size_t test_pairs = 64;
};

void validate(const SyntheticPairSpec& spec);

struct SyntheticPairs {
  Matrix image_inputs;  // n x input_dim
  Matrix text_inputs;   // n x input_dim
  std::vector<std::size_t> concepts;
};

// Fixed world (prototypes and the text-side instance map) sampled once per
// seed; splits drawn from it share that world.
class SyntheticWorld {
 public:
  SyntheticWorld(const SyntheticPairSpec& spec, Rng& rng);

  SyntheticPairs sample(std::size_t n, Rng& rng) const;
  const SyntheticPairSpec& spec() const { return spec_; }

 private:
  SyntheticPairSpec spec_;
  Matrix image_prototypes_;
  Matrix text_prototypes_;
  Matrix instance_map_;
};

}  // namespace vlcurate
