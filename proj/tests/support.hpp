#pragma once

// Fixture loaders and brute-force oracles shared by the unit and acceptance
// tests. Oracles are written independently of the library code they check.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vlcurate/catfilter.hpp"
#include "vlcurate/conllu.hpp"
#include "vlcurate/hnnce.hpp"
#include "vlcurate/probe.hpp"
#include "vlcurate/record.hpp"
#include "vlcurate/synthetic.hpp"

namespace testsupport {

std::string fixture_path(std::string_view name);
std::string read_file(const std::string& path);

// Parse of the sentence tagged "# sent_id = <key>" in captions.conllu.
vlcurate::DependencyParse sentence(std::string_view key);
std::vector<std::string> sentence_keys();

// Raw lines of corpus.jsonl (including its malformed lines).
std::vector<std::string> corpus_lines();

vlcurate::CaptionRecord make_record(std::string id, std::string_view sentence_key);

// Textspot oracle: longest common substring by dynamic programming over the
// normalized spot and caption.
std::string oracle_normalize(std::string_view text);
std::size_t longest_common_substring(std::string_view a, std::string_view b);
bool oracle_textspot_drop(const vlcurate::CaptionRecord& record, double conf_threshold,
                          std::size_t min_chars);

// Kept ids when every listed filter is applied on its own and the results
// intersected.
std::vector<std::string> brute_force_kept(const std::vector<vlcurate::CaptionRecord>& records,
                                          const std::vector<vlcurate::FilterKind>& filters,
                                          const vlcurate::FilterParams& params);

// Symmetric InfoNCE by a plain double loop over pairs.
double naive_info_nce(const vlcurate::Matrix& images, const vlcurate::Matrix& texts,
                      double tau);

// Margin fixture: n = 4, d = 5, tau = 1. Each row and each column of S has
// positive 0.5 and negatives 0.3, 0.2, 0.0, so the hardest negative leads the
// next by 0.1.
vlcurate::EmbeddingBatch margin_fixture();

// Ten-class Gaussian-cluster fixture with unit-norm features and prompts.
struct ClusterFixture {
  vlcurate::Matrix features;   // n x d
  std::vector<std::size_t> labels;
  vlcurate::Matrix prompts;    // n_c x d
};
ClusterFixture cluster_fixture(std::size_t classes, std::size_t per_class, std::size_t dim,
                               double spread, std::uint64_t seed);

// Argmax-cosine classifier computed with explicit loops.
std::vector<std::size_t> nearest_prompt(const vlcurate::Matrix& features,
                                        const vlcurate::Matrix& prompts);

// Unconstrained minimum of the probe's mean cross-entropy by plain gradient
// descent from W = 0, b = 0 until the gradient norm drops below `tol`.
struct ReferenceOptimum {
  double loss = 0.0;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
};
ReferenceOptimum reference_optimum(const vlcurate::Matrix& features,
                                   const std::vector<std::size_t>& labels,
                                   const vlcurate::Matrix& prompt_weights, double step,
                                   double tol, std::size_t max_iterations);

}  // namespace testsupport
