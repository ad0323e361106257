#include "vlcurate/conceptlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

namespace vlcurate {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

bool skip_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line.empty() || line.front() == '#';
}

}  // namespace

std::string Lexicon::canonical(const std::string& lemma) const {
  const auto it = map_.find(lemma);
  return it == map_.end() ? lemma : it->second;
}

Lexicon read_lexicon(std::istream& in) {
  std::unordered_map<std::string, std::string> map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw InputError("lexicon line " + std::to_string(line_no) +
                       ": expected lemma<TAB>key");
    }
    map[fields[0]] = fields[1];
  }
  return Lexicon(std::move(map));
}

ConceptVocab::ConceptVocab(NodeKind kind, std::vector<Concept> concepts)
    : kind_(kind), concepts_(std::move(concepts)) {
  for (std::size_t i = 0; i < concepts_.size(); ++i) {
    if (concepts_[i].id != i) throw InputError("vocabulary ids must be dense from 0");
    if (!index_.emplace(concepts_[i].key, i).second) {
      throw InputError("duplicate vocabulary key '" + concepts_[i].key + "'");
    }
  }
}

std::optional<std::size_t> ConceptVocab::find(const std::string& key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void ConceptCounter::add(const SemanticGraph& graph) {
  std::set<std::string> seen;
  for (const Node& n : graph.nodes) {
    if (n.kind == kind_) seen.insert(lexicon_->canonical(n.lemma));
  }
  for (const auto& key : seen) ++counts_[key];
}

void ConceptCounter::merge(const ConceptCounter& other) {
  for (const auto& [key, count] : other.counts_) counts_[key] += count;
}

ConceptVocab ConceptCounter::finish(std::uint64_t min_count) const {
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [key, count] : counts_) {
    if (count >= min_count) kept.emplace_back(key, count);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;  // keys already ascending from the map
  });
  std::vector<Concept> concepts;
  concepts.reserve(kept.size());
  for (auto& [key, count] : kept) concepts.push_back({concepts.size(), key, count});
  return ConceptVocab(kind_, std::move(concepts));
}

ConceptVocab build_vocab(std::span<const SemanticGraph> corpus, const Lexicon& lexicon,
                         NodeKind kind, std::uint64_t min_count) {
  ConceptCounter counter(lexicon, kind);
  for (const auto& g : corpus) counter.add(g);
  return counter.finish(min_count);
}

void write_vocab(std::ostream& out, const ConceptVocab& vocab) {
  for (const Concept& c : vocab.concepts()) {
    out << c.id << '\t' << c.key << '\t' << c.frequency << '\n';
  }
}

ConceptVocab read_vocab(std::istream& in, NodeKind kind) {
  std::vector<Concept> concepts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw InputError("vocab line " + std::to_string(line_no) +
                       ": expected id<TAB>key<TAB>frequency");
    }
    try {
      concepts.push_back({std::stoul(fields[0]), fields[1], std::stoull(fields[2])});
    } catch (const std::logic_error&) {
      throw InputError("vocab line " + std::to_string(line_no) + ": bad number");
    }
  }
  return ConceptVocab(kind, std::move(concepts));
}

std::vector<std::size_t> present_concepts(const SemanticGraph& graph,
                                          const Lexicon& lexicon,
                                          const ConceptVocab& vocab) {
  std::set<std::size_t> ids;
  for (const Node& n : graph.nodes) {
    if (n.kind != vocab.kind()) continue;
    if (auto id = vocab.find(lexicon.canonical(n.lemma))) ids.insert(*id);
  }
  return {ids.begin(), ids.end()};
}

SoftTarget soft_targets(std::span<const std::size_t> ids, const ConceptVocab& vocab) {
  if (ids.empty()) throw InputError("soft target needs at least one present concept");
  SoftTarget t;
  t.present.assign(ids.begin(), ids.end());
  std::sort(t.present.begin(), t.present.end());
  t.present.erase(std::unique(t.present.begin(), t.present.end()), t.present.end());
  if (t.present.back() >= vocab.size()) {
    throw InputError("concept id " + std::to_string(t.present.back()) +
                     " outside vocabulary of size " + std::to_string(vocab.size()));
  }
  t.dense.assign(vocab.size(), 0.0);
  const double mass = 1.0 / static_cast<double>(t.present.size());
  for (std::size_t id : t.present) t.dense[id] = mass;
  return t;
}

std::vector<double> sqrt_resample_weights(
    std::span<const std::vector<std::uint64_t>> image_concept_frequencies,
    double target_length) {
  if (!(target_length > 0.0) || !std::isfinite(target_length)) {
    throw InputError("target length must be positive");
  }
  std::vector<double> weights;
  weights.reserve(image_concept_frequencies.size());
  for (std::size_t i = 0; i < image_concept_frequencies.size(); ++i) {
    const auto& freqs = image_concept_frequencies[i];
    if (freqs.empty()) {
      throw InputError("image " + std::to_string(i) + " has no concepts");
    }
    const std::uint64_t rarest = *std::min_element(freqs.begin(), freqs.end());
    if (rarest == 0) {
      throw InputError("image " + std::to_string(i) + " has a zero concept frequency");
    }
    weights.push_back(1.0 / std::sqrt(static_cast<double>(rarest)));
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w *= target_length / total;
  return weights;
}

std::vector<double> PseudoLabel::to_dense(std::size_t dim) const {
  std::vector<double> out(dim, 0.0);
  for (const auto& [id, p] : entries) out.at(id) = p;
  return out;
}

PseudoLabel topk_sparsify(std::span<const double> probs, std::int64_t k) {
  if (k <= 0) throw InputError("top-k needs k >= 1");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw InputError("probability " + std::to_string(i) +
                       " is negative or not finite");
    }
    if (probs[i] > 0.0) order.push_back(i);
  }
  if (order.empty()) throw InputError("probability vector sums to zero");

  const std::size_t keep = std::min(order.size(), static_cast<std::size_t>(k));
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      return probs[a] != probs[b] ? probs[a] > probs[b] : a < b;
                    });
  order.resize(keep);
  std::sort(order.begin(), order.end());

  double total = 0.0;
  for (std::size_t i : order) total += probs[i];
  // Leave an already-normalized input bit-identical.
  const double slack = 4.0 * static_cast<double>(keep + 1) *
                       std::numeric_limits<double>::epsilon();
  const bool normalized = std::abs(total - 1.0) <= slack;

  PseudoLabel label;
  label.entries.reserve(keep);
  for (std::size_t i : order) {
    label.entries.emplace_back(i, normalized ? probs[i] : probs[i] / total);
  }
  return label;
}

CeResult ce_pseudo_loss(std::span<const double> logits, const PseudoLabel& label) {
  if (logits.empty()) throw InputError("cross-entropy needs at least one logit");
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!std::isfinite(logits[i])) {
      throw InputError("logit " + std::to_string(i) + " is not finite");
    }
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double v : logits) z += std::exp(v - peak);
  const double lse = peak + std::log(z);

  CeResult r;
  r.grad.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) r.grad[i] = std::exp(logits[i] - lse);
  for (const auto& [id, p] : label.entries) {
    if (id >= logits.size()) {
      throw InputError("label class " + std::to_string(id) + " outside " +
                       std::to_string(logits.size()) + " logits");
    }
    r.loss += p * (lse - logits[id]);
    r.grad[id] -= p;
  }
  return r;
}

std::string to_json_line(const PseudoLabelRecord& record) {
  using nlohmann::json;
  auto encode = [](const std::optional<PseudoLabel>& label) {
    json arr = json::array();
    if (label) {
      for (const auto& [id, p] : label->entries) arr.push_back(json::array({id, p}));
    }
    return arr;
  };
  json j;
  j["id"] = record.id;
  j["obj"] = encode(record.obj);
  j["attr"] = encode(record.attr);
  return j.dump();
}

PseudoLabelRecord parse_pseudo_label(std::string_view line) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("pseudo-label line is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
    throw InputError("pseudo-label line needs a string id");
  }
  auto decode = [&](const char* field) -> std::optional<PseudoLabel> {
    if (!j.contains(field) || j[field].is_null()) return std::nullopt;
    const json& arr = j[field];
    if (!arr.is_array()) throw InputError(std::string(field) + " must be an array");
    if (arr.empty()) return std::nullopt;
    PseudoLabel label;
    for (const json& e : arr) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
          !e[1].is_number()) {
        throw InputError(std::string(field) + " entries must be [class, prob]");
      }
      label.entries.emplace_back(e[0].get<std::size_t>(), e[1].get<double>());
    }
    return label;
  };
  return {j["id"].get<std::string>(), decode("obj"), decode("attr")};
}

}  // namespace vlcurate
