#include "support.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace testsupport {

using vlcurate::Matrix;

std::string fixture_path(std::string_view name) {
  return std::string(VLCURATE_FIXTURE_DIR) + "/" + std::string(name);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

struct Block {
  std::string key;
  std::string text;
};

std::vector<Block> conllu_blocks() {
  std::istringstream in(read_file(fixture_path("captions.conllu")));
  std::vector<Block> blocks;
  Block current;
  std::string line;
  auto flush = [&] {
    if (!current.text.empty()) blocks.push_back(current);
    current = {};
  };
  while (std::getline(in, line)) {
    if (line.empty()) {
      flush();
      continue;
    }
    const std::string tag = "# sent_id = ";
    if (line.rfind(tag, 0) == 0) current.key = line.substr(tag.size());
    current.text += line + "\n";
  }
  flush();
  return blocks;
}

}  // namespace

vlcurate::DependencyParse sentence(std::string_view key) {
  for (const auto& block : conllu_blocks()) {
    if (block.key == key) return vlcurate::parse_conllu(block.text);
  }
  throw std::runtime_error("no fixture sentence " + std::string(key));
}

std::vector<std::string> sentence_keys() {
  std::vector<std::string> keys;
  for (const auto& block : conllu_blocks()) keys.push_back(block.key);
  return keys;
}

std::vector<std::string> corpus_lines() {
  std::istringstream in(read_file(fixture_path("corpus.jsonl")));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

vlcurate::CaptionRecord make_record(std::string id, std::string_view sentence_key) {
  vlcurate::CaptionRecord record;
  record.id = std::move(id);
  record.parse = sentence(sentence_key);
  for (const auto& token : record.parse->tokens) {
    if (!record.caption.empty()) record.caption += ' ';
    record.caption += token.form;
  }
  return record;
}

std::string oracle_normalize(std::string_view text) {
  std::string out;
  for (char c : text) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      out += c;
    } else if (c >= 'A' && c <= 'Z') {
      out += static_cast<char>(c - 'A' + 'a');
    }
  }
  return out;
}

std::size_t longest_common_substring(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

bool oracle_textspot_drop(const vlcurate::CaptionRecord& record, double conf_threshold,
                          std::size_t min_chars) {
  const std::string caption = oracle_normalize(record.caption);
  for (const auto& spot : record.spots) {
    if (spot.confidence < conf_threshold) continue;
    if (longest_common_substring(oracle_normalize(spot.text), caption) >= min_chars) {
      return true;
    }
  }
  return false;
}

std::vector<std::string> brute_force_kept(const std::vector<vlcurate::CaptionRecord>& records,
                                          const std::vector<vlcurate::FilterKind>& filters,
                                          const vlcurate::FilterParams& params) {
  std::vector<std::string> kept;
  for (const auto& record : records) {
    bool keep = true;
    for (auto kind : filters) {
      bool pass = true;
      switch (kind) {
        case vlcurate::FilterKind::kScore:
          pass = vlcurate::score_filter(record, params.min_score).keep;
          break;
        case vlcurate::FilterKind::kComplexity:
          pass = vlcurate::complexity_filter(record, params.min_complexity).keep;
          break;
        case vlcurate::FilterKind::kAction:
          pass = vlcurate::action_filter(record).keep;
          break;
        case vlcurate::FilterKind::kTextspot:
          pass = !oracle_textspot_drop(record, params.spot_confidence, params.spot_chars);
          break;
      }
      keep = keep && pass;
    }
    if (keep) kept.push_back(record.id);
  }
  return kept;
}

double naive_info_nce(const Matrix& images, const Matrix& texts, double tau) {
  const auto n = images.rows();
  auto sim = [&](Eigen::Index i, Eigen::Index j) {
    double dot = 0.0;
    for (Eigen::Index k = 0; k < images.cols(); ++k) dot += images(i, k) * texts(j, k);
    return dot / tau;
  };
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      row += std::exp(sim(i, j));
      col += std::exp(sim(j, i));
    }
    loss -= std::log(std::exp(sim(i, i)) / row);
    loss -= std::log(std::exp(sim(i, i)) / col);
  }
  return loss;
}

vlcurate::EmbeddingBatch margin_fixture() {
  const int n = 4;
  const double offsets[4] = {0.5, 0.3, 0.2, 0.0};
  vlcurate::EmbeddingBatch batch;
  batch.images = Matrix::Zero(n, n + 1);
  batch.texts = Matrix::Zero(n, n + 1);
  for (int i = 0; i < n; ++i) {
    batch.texts(i, i) = 1.0;
    double sq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = offsets[k];
      batch.images(i, (i + k) % n) = v;
      sq += v * v;
    }
    batch.images(i, n) = std::sqrt(1.0 - sq);
  }
  batch.tau = 1.0;
  return batch;
}

ClusterFixture cluster_fixture(std::size_t classes, std::size_t per_class, std::size_t dim,
                               double spread, std::uint64_t seed) {
  vlcurate::Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ClusterFixture fx;
  fx.prompts = Matrix(classes, dim);
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t k = 0; k < dim; ++k) fx.prompts(c, k) = normal(rng);
    fx.prompts.row(c).normalize();
  }
  fx.features = Matrix(classes * per_class, dim);
  std::size_t row = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t s = 0; s < per_class; ++s, ++row) {
      for (std::size_t k = 0; k < dim; ++k) {
        fx.features(row, k) = fx.prompts(c, k) + spread * normal(rng);
      }
      fx.features.row(row).normalize();
      fx.labels.push_back(c);
    }
  }
  return fx;
}

std::vector<std::size_t> nearest_prompt(const Matrix& features, const Matrix& prompts) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    std::size_t best = 0;
    double best_score = -1e300;
    for (Eigen::Index c = 0; c < prompts.rows(); ++c) {
      double dot = 0.0, fn = 0.0, pn = 0.0;
      for (Eigen::Index k = 0; k < features.cols(); ++k) {
        dot += features(i, k) * prompts(c, k);
        fn += features(i, k) * features(i, k);
        pn += prompts(c, k) * prompts(c, k);
      }
      const double cosine = dot / std::sqrt(fn * pn);
      if (cosine > best_score) {
        best_score = cosine;
        best = static_cast<std::size_t>(c);
      }
    }
    out.push_back(best);
  }
  return out;
}

ReferenceOptimum reference_optimum(const Matrix& features, const std::vector<std::size_t>& labels,
                                   const Matrix& prompt_weights, double step, double tol,
                                   std::size_t max_iterations) {
  const auto n = features.rows();
  const auto d = features.cols();
  const auto c = prompt_weights.cols();
  std::vector<double> w(static_cast<std::size_t>(d * c), 0.0), b(c, 0.0);
  std::vector<double> gw(w.size()), gb(b.size()), z(c);
  ReferenceOptimum out;
  for (std::size_t it = 0;; ++it) {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double zmax = -1e300;
      for (Eigen::Index j = 0; j < c; ++j) {
        double v = b[j];
        for (Eigen::Index k = 0; k < d; ++k) {
          v += features(i, k) * (prompt_weights(k, j) + w[k * c + j]);
        }
        z[j] = v;
        zmax = std::max(zmax, v);
      }
      double sum = 0.0;
      for (Eigen::Index j = 0; j < c; ++j) sum += std::exp(z[j] - zmax);
      const double lse = zmax + std::log(sum);
      loss += lse - z[labels[i]];
      for (Eigen::Index j = 0; j < c; ++j) {
        const double r = std::exp(z[j] - lse) - (labels[i] == static_cast<std::size_t>(j));
        gb[j] += r / n;
        for (Eigen::Index k = 0; k < d; ++k) gw[k * c + j] += r * features(i, k) / n;
      }
    }
    double norm = 0.0;
    for (double g : gw) norm += g * g;
    for (double g : gb) norm += g * g;
    out.loss = loss / n;
    out.grad_norm = std::sqrt(norm);
    out.iterations = it;
    if (out.grad_norm < tol || it == max_iterations) return out;
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= step * gw[k];
    for (std::size_t k = 0; k < b.size(); ++k) b[k] -= step * gb[k];
  }
}

}  // namespace testsupport
