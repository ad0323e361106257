#include "vlcurate/semgraph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace vlcurate {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// "nsubj:pass" -> "nsubj"
std::string_view base_rel(std::string_view deprel) {
  return deprel.substr(0, deprel.find(':'));
}

bool is_mirror(Relation rel) {
  return rel == Relation::kIsActSubj || rel == Relation::kIsActObj;
}

Relation mirror_of(Relation rel) {
  switch (rel) {
    case Relation::kActHasSubj: return Relation::kIsActSubj;
    case Relation::kActHasObj: return Relation::kIsActObj;
    case Relation::kIsActSubj: return Relation::kActHasSubj;
    case Relation::kIsActObj: return Relation::kActHasObj;
    default: return rel;
  }
}

bool has_mirror(Relation rel) { return mirror_of(rel) != rel; }

// Builds nodes keyed by (token, kind) and remaps them into span order once
// all rules have run.
class GraphBuilder {
 public:
  explicit GraphBuilder(const DependencyParse& parse) : parse_(parse) {}

  SemanticGraph run() {
    classify_nouns();
    for (std::size_t i = 0; i < parse_.size(); ++i) attach_modifier(i);
    link_parts();
    link_actions();
    return finish();
  }

 private:
  using Key = std::pair<std::size_t, NodeKind>;

  const Token& tok(std::size_t i) const { return parse_.tokens[i]; }

  std::optional<std::size_t> head_of(std::size_t i) const { return tok(i).head; }

  bool has(std::size_t token, NodeKind kind) const {
    return nodes_.count({token, kind}) > 0;
  }

  void make(std::size_t token, NodeKind kind) {
    nodes_.try_emplace({token, kind}, tok(token).lemma);
  }

  void link(std::size_t src_tok, NodeKind src_kind, Relation rel,
            std::size_t dst_tok, NodeKind dst_kind) {
    edges_.insert({{src_tok, src_kind}, rel, {dst_tok, dst_kind}});
  }

  // The token's own node when it can carry attributes.
  std::optional<Key> attribute_owner(std::size_t token) const {
    if (has(token, NodeKind::kObject)) return Key{token, NodeKind::kObject};
    if (has(token, NodeKind::kAttribute)) return Key{token, NodeKind::kAttribute};
    return std::nullopt;
  }

  void classify_nouns() {
    for (std::size_t i = 0; i < parse_.size(); ++i) {
      if (tok(i).pos != Pos::kNoun) continue;
      const auto head = head_of(i);
      const bool modifies_noun = head && base_rel(tok(i).deprel) == "compound" &&
                                 tok(*head).pos == Pos::kNoun;
      make(i, modifies_noun ? NodeKind::kAttribute : NodeKind::kObject);
    }
    // Compound attributes hang off their head noun, which is itself an
    // object or (for chained compounds) another attribute.
    for (std::size_t i = 0; i < parse_.size(); ++i) {
      if (tok(i).pos != Pos::kNoun || !has(i, NodeKind::kAttribute)) continue;
      const std::size_t head = *head_of(i);
      if (auto owner = attribute_owner(head)) {
        link(owner->first, owner->second, Relation::kHasAttr, i,
             NodeKind::kAttribute);
      }
    }
  }

  // Subject noun of a predicate token, if it is an object.
  std::optional<std::size_t> object_subject(std::size_t pred) const {
    for (std::size_t c : parse_.children(pred)) {
      if (tok(c).deprel == "nsubj" && has(c, NodeKind::kObject)) return c;
    }
    return std::nullopt;
  }

  // Resolves what an adjective/numeral/participle describes.
  std::optional<Key> modifier_owner(std::size_t i, int depth = 0) const {
    if (depth > static_cast<int>(parse_.size())) return std::nullopt;
    const std::string_view rel = base_rel(tok(i).deprel);
    const auto head = head_of(i);

    // Predicative use: "the cat is black" / "the dog looks happy".
    if (auto subj = object_subject(i)) return Key{*subj, NodeKind::kObject};
    if (!head) return std::nullopt;
    const Token& h = tok(*head);

    if (rel == "xcomp" && h.pos == Pos::kVerb && is_excluded_verb(lower(h.lemma))) {
      if (auto subj = object_subject(*head)) return Key{*subj, NodeKind::kObject};
      return std::nullopt;
    }
    if (rel == "conj" && (h.pos == Pos::kAdj || h.pos == Pos::kNum)) {
      return modifier_owner(*head, depth + 1);
    }
    static constexpr std::array<std::string_view, 5> kModifierRels = {
        "amod", "nummod", "compound", "advmod", "dep"};
    if (std::find(kModifierRels.begin(), kModifierRels.end(), rel) ==
        kModifierRels.end()) {
      return std::nullopt;
    }
    if (auto owner = attribute_owner(*head)) return owner;
    // Attribute of an attribute: "dark green".
    if (h.pos == Pos::kAdj || h.pos == Pos::kNum) {
      if (modifier_owner(*head, depth + 1)) return Key{*head, NodeKind::kAttribute};
    }
    return std::nullopt;
  }

  void attach_modifier(std::size_t i) {
    const Token& t = tok(i);
    const bool participle = t.pos == Pos::kVerb && base_rel(t.deprel) == "amod";
    if (t.pos != Pos::kAdj && t.pos != Pos::kNum && !participle) return;
    if (participle && is_excluded_verb(lower(t.lemma))) return;
    const auto owner = modifier_owner(i);
    if (!owner) return;
    make(i, NodeKind::kAttribute);
    link(owner->first, owner->second, Relation::kHasAttr, i, NodeKind::kAttribute);
    // A participial modifier is an attribute and an argument-less action.
    if (participle) make(i, NodeKind::kAction);
  }

  bool has_case_with(std::size_t noun) const {
    for (std::size_t c : parse_.children(noun)) {
      if (base_rel(tok(c).deprel) == "case" && lower(tok(c).lemma) == "with") return true;
    }
    return false;
  }

  void link_parts() {
    for (std::size_t i = 0; i < parse_.size(); ++i) {
      if (!has(i, NodeKind::kObject)) continue;
      const auto head = head_of(i);
      if (!head) continue;
      const std::string_view rel = base_rel(tok(i).deprel);
      // UD style: candles --nmod--> cake, with --case--> candles.
      if (rel == "nmod" && has(*head, NodeKind::kObject) && has_case_with(i)) {
        link(*head, NodeKind::kObject, Relation::kHasPart, i, NodeKind::kObject);
        continue;
      }
      // Stanford style: candles --pobj--> with --prep--> cake.
      if (rel == "pobj" && lower(tok(*head).lemma) == "with" && tok(*head).head &&
          has(*tok(*head).head, NodeKind::kObject)) {
        link(*tok(*head).head, NodeKind::kObject, Relation::kHasPart, i,
             NodeKind::kObject);
      }
    }
  }

  // The argument noun plus nouns coordinated with it ("a cat and a dog").
  std::vector<std::size_t> with_conjuncts(std::size_t noun) const {
    std::vector<std::size_t> out{noun};
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (std::size_t c : parse_.children(out[k])) {
        if (base_rel(tok(c).deprel) == "conj" && has(c, NodeKind::kObject)) out.push_back(c);
      }
    }
    return out;
  }

  void link_actions() {
    for (std::size_t v = 0; v < parse_.size(); ++v) {
      const Token& t = tok(v);
      if (t.pos != Pos::kVerb) continue;
      const std::string lemma = lower(t.lemma);
      std::vector<std::size_t> subjects;
      std::vector<std::size_t> objects;
      for (std::size_t c : parse_.children(v)) {
        if (!has(c, NodeKind::kObject)) continue;
        const std::string& rel = tok(c).deprel;
        const std::string_view base = base_rel(rel);
        if (rel == "nsubj") {
          for (std::size_t a : with_conjuncts(c)) subjects.push_back(a);
        } else if (base == "obj" || base == "dobj" || rel == "nsubj:pass") {
          for (std::size_t a : with_conjuncts(c)) objects.push_back(a);
        }
      }
      if (is_excluded_verb(lemma)) {
        // "the cake has candles" states a part, not an action.
        if (lemma == "have") {
          for (std::size_t s : subjects) {
            for (std::size_t o : objects) {
              link(s, NodeKind::kObject, Relation::kHasPart, o, NodeKind::kObject);
            }
          }
        }
        continue;
      }
      if (has(v, NodeKind::kAction)) continue;  // participial modifier
      // Reduced relative: "a dog catching a frisbee" -> dog is the subject.
      if (subjects.empty() && base_rel(t.deprel) == "acl" && t.head &&
          has(*t.head, NodeKind::kObject)) {
        subjects.push_back(*t.head);
      }
      make(v, NodeKind::kAction);
      for (std::size_t s : subjects) {
        link(v, NodeKind::kAction, Relation::kActHasSubj, s, NodeKind::kObject);
      }
      for (std::size_t o : objects) {
        link(v, NodeKind::kAction, Relation::kActHasObj, o, NodeKind::kObject);
      }
    }
  }

  SemanticGraph finish() {
    SemanticGraph graph;
    std::map<Key, std::size_t> ids;
    for (const auto& [key, lemma] : nodes_) {
      ids[key] = graph.add_node(key.second, lemma, key.first, key.first + 1);
    }
    for (const auto& e : edges_) graph.add_edge(ids.at(e.src), e.rel, ids.at(e.dst));
    std::sort(graph.edges.begin(), graph.edges.end());
    graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()),
                      graph.edges.end());
    return graph;
  }

  struct PendingEdge {
    Key src;
    Relation rel;
    Key dst;
    friend auto operator<=>(const PendingEdge&, const PendingEdge&) = default;
  };

  const DependencyParse& parse_;
  std::map<Key, std::string> nodes_;
  std::set<PendingEdge> edges_;
};

}  // namespace

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::kObject: return "OBJECT";
    case NodeKind::kAttribute: return "ATTRIBUTE";
    case NodeKind::kAction: return "ACTION";
  }
  return "?";
}

std::string_view relation_name(Relation rel) {
  switch (rel) {
    case Relation::kHasAttr: return "has_attr";
    case Relation::kHasPart: return "has_part";
    case Relation::kActHasSubj: return "act_has_subj";
    case Relation::kActHasObj: return "act_has_obj";
    case Relation::kIsActSubj: return "is_act_subj";
    case Relation::kIsActObj: return "is_act_obj";
  }
  return "?";
}

bool is_excluded_verb(std::string_view lemma) {
  return lemma == "be" || lemma == "look" || lemma == "seem" || lemma == "have";
}

std::size_t SemanticGraph::add_node(NodeKind kind, std::string lemma,
                                    std::size_t begin, std::size_t end) {
  const std::size_t id = nodes.size();
  nodes.push_back({id, kind, std::move(lemma), begin, end});
  return id;
}

void SemanticGraph::add_edge(std::size_t src, Relation rel, std::size_t dst) {
  if (is_mirror(rel)) {
    std::swap(src, dst);
    rel = mirror_of(rel);
  }
  edges.push_back({src, rel, dst});
  if (has_mirror(rel)) edges.push_back({dst, mirror_of(rel), src});
}

void validate(const SemanticGraph& graph) {
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (graph.nodes[i].id != i) {
      throw InputError("semantic graph: node at position " + std::to_string(i) +
                       " has id " + std::to_string(graph.nodes[i].id));
    }
  }
  auto kind = [&](std::size_t id) { return graph.nodes[id].kind; };
  std::multiset<Edge> edges(graph.edges.begin(), graph.edges.end());
  for (const Edge& e : graph.edges) {
    if (e.src >= graph.nodes.size() || e.dst >= graph.nodes.size()) {
      throw InputError("semantic graph: edge references a missing node");
    }
    bool ok = true;
    switch (e.rel) {
      case Relation::kHasAttr:
        ok = kind(e.src) != NodeKind::kAction && kind(e.dst) == NodeKind::kAttribute;
        break;
      case Relation::kHasPart:
        ok = kind(e.src) == NodeKind::kObject && kind(e.dst) == NodeKind::kObject;
        break;
      case Relation::kActHasSubj:
      case Relation::kActHasObj:
        ok = kind(e.src) == NodeKind::kAction && kind(e.dst) == NodeKind::kObject;
        break;
      case Relation::kIsActSubj:
      case Relation::kIsActObj:
        ok = kind(e.src) == NodeKind::kObject && kind(e.dst) == NodeKind::kAction;
        break;
    }
    if (!ok) {
      throw InputError("semantic graph: " + std::string(relation_name(e.rel)) +
                       " edge " + std::to_string(e.src) + "->" +
                       std::to_string(e.dst) + " has wrong endpoint kinds");
    }
    if (has_mirror(e.rel) &&
        edges.count({e.dst, mirror_of(e.rel), e.src}) != edges.count(e)) {
      throw InputError("semantic graph: " + std::string(relation_name(e.rel)) +
                       " edge " + std::to_string(e.src) + "->" +
                       std::to_string(e.dst) + " lacks its mirror");
    }
  }
}

SemanticGraph build_graph(const DependencyParse& parse) {
  validate(parse);
  return GraphBuilder(parse).run();
}

std::size_t relation_count(const SemanticGraph& graph, std::size_t object_id) {
  std::size_t count = 0;
  for (const Edge& e : graph.edges) {
    if (e.src != object_id) continue;
    switch (e.rel) {
      case Relation::kHasAttr:
      case Relation::kHasPart:
      case Relation::kIsActSubj:
      case Relation::kIsActObj:
        ++count;
        break;
      default:
        break;
    }
  }
  return count;
}

std::size_t complexity(const SemanticGraph& graph) {
  std::size_t level = 0;
  for (const Node& n : graph.nodes) {
    if (n.kind == NodeKind::kObject) level = std::max(level, relation_count(graph, n.id));
  }
  return level;
}

std::size_t action_count(const SemanticGraph& graph) {
  return static_cast<std::size_t>(
      std::count_if(graph.nodes.begin(), graph.nodes.end(),
                    [](const Node& n) { return n.kind == NodeKind::kAction; }));
}

std::string serialize(const SemanticGraph& graph) {
  std::ostringstream os;
  for (const Node& n : graph.nodes) {
    os << "node\t" << n.id << '\t' << kind_name(n.kind) << '\t' << n.lemma << '\t'
       << n.span_begin << '-' << n.span_end << '\n';
  }
  std::vector<Edge> edges = graph.edges;
  std::sort(edges.begin(), edges.end());
  for (const Edge& e : edges) {
    os << "edge\t" << e.src << '\t' << relation_name(e.rel) << '\t' << e.dst << '\n';
  }
  return os.str();
}

}  // namespace vlcurate
