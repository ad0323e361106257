#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vlcurate/conllu.hpp"

namespace vlcurate {

enum class NodeKind { kObject, kAttribute, kAction };

enum class Relation {
  kHasAttr,
  kHasPart,
  kActHasSubj,
  kActHasObj,
  kIsActSubj,
  kIsActObj,
};

std::string_view kind_name(NodeKind kind);
std::string_view relation_name(Relation rel);

struct Node {
  std::size_t id = 0;
  NodeKind kind = NodeKind::kObject;
  std::string lemma;
  // Half-open token range in the source parse.
  std::size_t span_begin = 0;
  std::size_t span_end = 0;
};

struct Edge {
  std::size_t src = 0;
  Relation rel = Relation::kHasAttr;
  std::size_t dst = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Typed object/attribute/action graph. Node ids equal positions in `nodes`;
// build_graph emits nodes ordered by token span.
struct SemanticGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  std::size_t add_node(NodeKind kind, std::string lemma, std::size_t begin,
                       std::size_t end);
  // Adds the edge; for subject/object links the mirrored edge is added too.
  void add_edge(std::size_t src, Relation rel, std::size_t dst);
};

// Throws InputError if any typing, id, or mirror invariant is broken.
void validate(const SemanticGraph& graph);

// Applies the caption rule layer to a parse. Validates the parse first.
SemanticGraph build_graph(const DependencyParse& parse);

// Relations attached directly to one OBJECT node: outgoing has_attr and
// has_part plus each action it takes part in as subject or object.
std::size_t relation_count(const SemanticGraph& graph, std::size_t object_id);

// Maximum relation_count over OBJECT nodes; 0 if there are none.
std::size_t complexity(const SemanticGraph& graph);

std::size_t action_count(const SemanticGraph& graph);

// Canonical text form: one "node" line per node in id order followed by
// one "edge" line per edge in (src, relation, dst) order.
std::string serialize(const SemanticGraph& graph);

// Lemmas that never yield an ACTION node.
bool is_excluded_verb(std::string_view lemma);

}  // namespace vlcurate
