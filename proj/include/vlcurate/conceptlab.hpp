#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vlcurate/semgraph.hpp"

namespace vlcurate {

inline constexpr std::uint64_t kDefaultMinConceptCount = 250;
inline constexpr std::size_t kDefaultTopK = 10;

// Surface lemma -> canonical concept key. Unmapped lemmas map to themselves.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::unordered_map<std::string, std::string> map)
      : map_(std::move(map)) {}

  std::string canonical(const std::string& lemma) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, std::string> map_;
};

// Tab-separated "lemma<TAB>key" lines; '#' lines and blank lines ignored.
Lexicon read_lexicon(std::istream& in);

struct Concept {
  std::size_t id = 0;
  std::string key;
  std::uint64_t frequency = 0;
};

class ConceptVocab {
 public:
  ConceptVocab() = default;
  ConceptVocab(NodeKind kind, std::vector<Concept> concepts);

  NodeKind kind() const { return kind_; }
  std::size_t size() const { return concepts_.size(); }
  bool empty() const { return concepts_.empty(); }
  const Concept& at(std::size_t id) const { return concepts_.at(id); }
  const std::vector<Concept>& concepts() const { return concepts_; }
  std::optional<std::size_t> find(const std::string& key) const;

 private:
  NodeKind kind_ = NodeKind::kObject;
  std::vector<Concept> concepts_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Counts, per canonical key, the number of captions mentioning it at least
// once. Counters over disjoint shards merge associatively.
class ConceptCounter {
 public:
  ConceptCounter(const Lexicon& lexicon, NodeKind kind)
      : lexicon_(&lexicon), kind_(kind) {}

  void add(const SemanticGraph& graph);
  void merge(const ConceptCounter& other);
  // Drops keys below `min_count`; ids by descending count, then key.
  ConceptVocab finish(std::uint64_t min_count = kDefaultMinConceptCount) const;

  const std::map<std::string, std::uint64_t>& counts() const { return counts_; }

 private:
  const Lexicon* lexicon_;
  NodeKind kind_;
  std::map<std::string, std::uint64_t> counts_;
};

ConceptVocab build_vocab(std::span<const SemanticGraph> corpus, const Lexicon& lexicon,
                         NodeKind kind = NodeKind::kObject,
                         std::uint64_t min_count = kDefaultMinConceptCount);

// "id<TAB>key<TAB>frequency" lines.
void write_vocab(std::ostream& out, const ConceptVocab& vocab);
ConceptVocab read_vocab(std::istream& in, NodeKind kind = NodeKind::kObject);

// Sorted distinct vocabulary ids of the graph's nodes of the vocab's kind.
std::vector<std::size_t> present_concepts(const SemanticGraph& graph,
                                          const Lexicon& lexicon,
                                          const ConceptVocab& vocab);

struct SoftTarget {
  std::vector<std::size_t> present;  // sorted, distinct
  std::vector<double> dense;         // 1/K on `present`, 0 elsewhere
};

// Throws InputError for an empty id list or an id outside the vocabulary.
SoftTarget soft_targets(std::span<const std::size_t> ids, const ConceptVocab& vocab);

// Per-image sampling weights proportional to 1/sqrt of the rarest concept
// frequency in the image, scaled to sum to `target_length`.
std::vector<double> sqrt_resample_weights(
    std::span<const std::vector<std::uint64_t>> image_concept_frequencies,
    double target_length);

// Sparse probability vector: distinct ids in ascending order, positive
// probabilities summing to one.
struct PseudoLabel {
  std::vector<std::pair<std::size_t, double>> entries;

  std::vector<double> to_dense(std::size_t dim) const;
  friend bool operator==(const PseudoLabel&, const PseudoLabel&) = default;
};

// Keeps the k largest entries (ties to the lower id) and renormalizes. Input
// that is already a normalized distribution on at most k entries comes back
// unchanged. Throws InputError for k <= 0, negative or non-finite entries, or
// a zero total.
PseudoLabel topk_sparsify(std::span<const double> probs, std::int64_t k);

struct CeResult {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d logits
};

// Cross-entropy of softmax(logits) against a sparse soft label.
CeResult ce_pseudo_loss(std::span<const double> logits, const PseudoLabel& label);

struct PseudoLabelRecord {
  std::string id;
  std::optional<PseudoLabel> obj;
  std::optional<PseudoLabel> attr;
};

// {"id": "...", "obj": [[class, prob], ...], "attr": [[class, prob], ...]}
std::string to_json_line(const PseudoLabelRecord& record);
PseudoLabelRecord parse_pseudo_label(std::string_view line);

}  // namespace vlcurate
