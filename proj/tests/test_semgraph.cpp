#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "vlcurate/conllu.hpp"
#include "vlcurate/semgraph.hpp"

using namespace vlcurate;
using testsupport::sentence;

namespace {

struct Fact {
  std::string src;
  Relation rel;
  std::string dst;
  friend auto operator<=>(const Fact&, const Fact&) = default;
};

std::set<Fact> facts(const SemanticGraph& g) {
  std::set<Fact> out;
  for (const auto& e : g.edges) out.insert({g.nodes[e.src].lemma, e.rel, g.nodes[e.dst].lemma});
  return out;
}

std::multiset<std::string> lemmas_of(const SemanticGraph& g, NodeKind kind) {
  std::multiset<std::string> out;
  for (const auto& n : g.nodes) {
    if (n.kind == kind) out.insert(n.lemma);
  }
  return out;
}

// Exhaustive per-object edge count straight from the edge list.
std::size_t oracle_complexity(const SemanticGraph& g) {
  std::size_t best = 0;
  for (const auto& n : g.nodes) {
    if (n.kind != NodeKind::kObject) continue;
    std::size_t count = 0;
    for (const auto& e : g.edges) {
      if (e.src != n.id) continue;
      if (e.rel == Relation::kHasAttr || e.rel == Relation::kHasPart ||
          e.rel == Relation::kIsActSubj || e.rel == Relation::kIsActObj) {
        ++count;
      }
    }
    best = std::max(best, count);
  }
  return best;
}

// Mirror closure checked by scanning the edge list.
bool mirror_closed(const SemanticGraph& g) {
  auto count = [&](std::size_t s, Relation r, std::size_t d) {
    return std::count(g.edges.begin(), g.edges.end(), Edge{s, r, d});
  };
  for (const auto& e : g.edges) {
    switch (e.rel) {
      case Relation::kActHasSubj:
        if (count(e.dst, Relation::kIsActSubj, e.src) != 1) return false;
        break;
      case Relation::kActHasObj:
        if (count(e.dst, Relation::kIsActObj, e.src) != 1) return false;
        break;
      case Relation::kIsActSubj:
        if (count(e.dst, Relation::kActHasSubj, e.src) != 1) return false;
        break;
      case Relation::kIsActObj:
        if (count(e.dst, Relation::kActHasObj, e.src) != 1) return false;
        break;
      default:
        break;
    }
  }
  return true;
}

// Random single-rooted tree with random tags and labels.
DependencyParse random_parse(std::mt19937_64& rng) {
  static const char* lemmas[] = {"cat", "dog", "red", "run", "be", "have", "look",
                                 "seem", "with", "two", "eat", "ball", "the", "Bob"};
  static const char* upos[] = {"NOUN", "NOUN", "ADJ", "VERB", "NUM", "ADP", "DET", "PROPN", "AUX"};
  static const char* rels[] = {"nsubj", "obj", "amod", "nummod", "compound", "nmod", "case",
                               "det", "acl", "conj", "xcomp", "advmod", "dobj", "nsubj:pass",
                               "obl", "dep", "cop"};
  std::uniform_int_distribution<int> len(1, 9);
  const int n = len(rng);
  DependencyParse p;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  p.tokens.resize(n);
  for (int k = 0; k < n; ++k) {
    auto& t = p.tokens[order[k]];
    t.lemma = lemmas[rng() % std::size(lemmas)];
    t.form = t.lemma;
    t.pos = pos_from_upos(upos[rng() % std::size(upos)]);
    if (k == 0) {
      t.deprel = "root";
    } else {
      t.head = static_cast<std::size_t>(order[rng() % k]);
      t.deprel = rels[rng() % std::size(rels)];
    }
  }
  return p;
}

}  // namespace

TEST_CASE("conllu reader maps fields and converts heads to 0-based") {
  const auto p = sentence("chasing");
  REQUIRE(p.size() == 9);
  CHECK(p.tokens[2].form == "cat");
  CHECK(p.tokens[2].pos == Pos::kNoun);
  CHECK(p.tokens[2].head == 4u);
  CHECK(p.tokens[4].lemma == "chase");
  CHECK_FALSE(p.tokens[4].head.has_value());
  CHECK(p.children(4) == std::vector<std::size_t>{2, 3, 8});
}

TEST_CASE("conllu reader skips comments, multiword ranges and empty nodes") {
  const std::string text =
      "# text = dont run\n"
      "1-2\tdont\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n"
      "2\tnt\tnot\tPART\t_\t_\t3\tadvmod\t_\t_\n"
      "2.1\tghost\tghost\tNOUN\t_\t_\t_\t_\t_\t_\n"
      "3\trun\trun\tVERB\t_\t_\t0\troot\t_\t_\n";
  const auto p = parse_conllu(text);
  REQUIRE(p.size() == 3);
  CHECK(p.tokens[1].pos == Pos::kOther);
  CHECK(p.tokens[0].head == 2u);
}

TEST_CASE("conllu round trip is stable") {
  for (const auto& key : testsupport::sentence_keys()) {
    const auto p = sentence(key);
    const auto again = parse_conllu(to_conllu(p));
    CHECK(to_conllu(again) == to_conllu(p));
    CHECK(serialize(build_graph(again)) == serialize(build_graph(p)));
  }
}

TEST_CASE("read_conllu splits blank-line blocks") {
  std::istringstream in(testsupport::read_file(testsupport::fixture_path("captions.conllu")));
  const auto parses = read_conllu(in);
  CHECK(parses.size() == testsupport::sentence_keys().size());
}

TEST_CASE("malformed parses raise errors naming the token") {
  SUBCASE("two roots") {
    const std::string text =
        "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"
        "2\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_\n";
    try {
      parse_conllu(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.token() == 1);
    }
  }
  SUBCASE("cycle") {
    const std::string text =
        "1\ta\ta\tNOUN\t_\t_\t2\tdep\t_\t_\n"
        "2\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_\n"
        "3\tc\tc\tVERB\t_\t_\t0\troot\t_\t_\n";
    CHECK_THROWS_AS(parse_conllu(text), ParseError);
  }
  SUBCASE("no root") {
    const std::string text =
        "1\ta\ta\tNOUN\t_\t_\t2\tdep\t_\t_\n"
        "2\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_\n";
    CHECK_THROWS_AS(parse_conllu(text), ParseError);
  }
  SUBCASE("head out of range") {
    const std::string text = "1\ta\ta\tNOUN\t_\t_\t5\tdep\t_\t_\n";
    CHECK_THROWS_AS(parse_conllu(text), ParseError);
  }
  SUBCASE("empty relation") {
    DependencyParse p;
    p.tokens.push_back({"a", "a", Pos::kNoun, std::nullopt, ""});
    CHECK_THROWS_AS(validate(p), ParseError);
    CHECK_THROWS_AS(build_graph(p), ParseError);
  }
  SUBCASE("short line") {
    CHECK_THROWS_AS(parse_conllu("1\ta\ta\tNOUN\n"), InputError);
  }
}

TEST_CASE("chasing example yields the two-object graph with one action") {
  const auto g = build_graph(sentence("chasing"));
  validate(g);
  CHECK(lemmas_of(g, NodeKind::kObject) == std::multiset<std::string>{"cat", "bird"});
  CHECK(lemmas_of(g, NodeKind::kAttribute) ==
        std::multiset<std::string>{"black", "small", "brown"});
  CHECK(lemmas_of(g, NodeKind::kAction) == std::multiset<std::string>{"chase"});
  const std::set<Fact> expected = {
      {"cat", Relation::kHasAttr, "black"},       {"bird", Relation::kHasAttr, "small"},
      {"bird", Relation::kHasAttr, "brown"},      {"chase", Relation::kActHasSubj, "cat"},
      {"chase", Relation::kActHasObj, "bird"},    {"cat", Relation::kIsActSubj, "chase"},
      {"bird", Relation::kIsActObj, "chase"},
  };
  CHECK(facts(g) == expected);
  CHECK(complexity(g) == 3);
  CHECK(action_count(g) == 1);

  const std::string serialized =
      "node\t0\tATTRIBUTE\tblack\t1-2\n"
      "node\t1\tOBJECT\tcat\t2-3\n"
      "node\t2\tACTION\tchase\t4-5\n"
      "node\t3\tATTRIBUTE\tsmall\t6-7\n"
      "node\t4\tATTRIBUTE\tbrown\t7-8\n"
      "node\t5\tOBJECT\tbird\t8-9\n"
      "edge\t1\thas_attr\t0\n"
      "edge\t1\tis_act_subj\t2\n"
      "edge\t2\tact_has_subj\t1\n"
      "edge\t2\tact_has_obj\t5\n"
      "edge\t5\thas_attr\t3\n"
      "edge\t5\thas_attr\t4\n"
      "edge\t5\tis_act_obj\t2\n";
  CHECK(serialize(g) == serialized);
}

TEST_CASE("cake with candles yields has_part and no action") {
  const auto g = build_graph(sentence("cake"));
  const std::set<Fact> expected = {
      {"cake", Relation::kHasPart, "candle"},
      {"candle", Relation::kHasAttr, "yellow"},
      {"candle", Relation::kHasAttr, "21"},
  };
  CHECK(facts(g) == expected);
  CHECK(action_count(g) == 0);
  CHECK(complexity(g) == 2);
}

TEST_CASE("person eating apple has mirrored subject and object edges") {
  const auto g = build_graph(sentence("eating"));
  const std::set<Fact> expected = {
      {"eat", Relation::kActHasSubj, "person"},
      {"eat", Relation::kActHasObj, "apple"},
      {"person", Relation::kIsActSubj, "eat"},
      {"apple", Relation::kIsActObj, "eat"},
  };
  CHECK(facts(g) == expected);
  CHECK(action_count(g) == 1);
  CHECK(complexity(g) == 1);
}

TEST_CASE("excluded verbs produce no action") {
  const auto looks = build_graph(sentence("looks"));
  CHECK(action_count(looks) == 0);
  CHECK(facts(looks) == std::set<Fact>{{"dog", Relation::kHasAttr, "happy"}});

  const auto seem = build_graph(sentence("seem"));
  CHECK(action_count(seem) == 0);
  CHECK(complexity(seem) == 2);

  const auto beard = build_graph(sentence("beard"));
  CHECK(action_count(beard) == 0);
  CHECK(facts(beard) == std::set<Fact>{{"man", Relation::kHasPart, "beard"}});

  const auto copula = build_graph(sentence("copula"));
  CHECK(action_count(copula) == 0);
  CHECK(facts(copula) == std::set<Fact>{{"cat", Relation::kHasAttr, "black"}});

  for (auto lemma : {"be", "look", "seem", "have"}) CHECK(is_excluded_verb(lemma));
  CHECK_FALSE(is_excluded_verb("chase"));
}

TEST_CASE("small graphs from the rule inventory") {
  SUBCASE("red car") {
    const auto g = build_graph(sentence("redcar"));
    CHECK(complexity(g) == 1);
    CHECK(complexity(g) == oracle_complexity(g));
  }
  SUBCASE("noun compound becomes an attribute, other nmod is not a part") {
    const auto g = build_graph(sentence("birthday"));
    CHECK(facts(g) == std::set<Fact>{{"cake", Relation::kHasAttr, "birthday"}});
    CHECK(lemmas_of(g, NodeKind::kObject) == std::multiset<std::string>{"cake", "table"});
  }
  SUBCASE("proper nouns never become objects") {
    const auto g = build_graph(sentence("nike"));
    CHECK(lemmas_of(g, NodeKind::kObject) == std::multiset<std::string>{"shoe", "sale"});
    CHECK(g.edges.empty());
    CHECK(complexity(g) == 0);
  }
  SUBCASE("clausal modifier takes its head noun as subject") {
    const auto g = build_graph(sentence("frisbee"));
    CHECK(facts(g).count({"catch", Relation::kActHasSubj, "dog"}) == 1);
    CHECK(facts(g).count({"catch", Relation::kActHasObj, "frisbee"}) == 1);
    CHECK(complexity(g) == 2);
  }
  SUBCASE("conjoined subjects both join the action") {
    const auto g = build_graph(sentence("sleeping"));
    CHECK(facts(g).count({"sleep", Relation::kActHasSubj, "cat"}) == 1);
    CHECK(facts(g).count({"sleep", Relation::kActHasSubj, "dog"}) == 1);
  }
  SUBCASE("participle yields an attribute and an argument-less action") {
    const auto g = build_graph(sentence("running"));
    CHECK(facts(g) == std::set<Fact>{{"person", Relation::kHasAttr, "run"}});
    CHECK(action_count(g) == 1);
    CHECK(complexity(g) == 1);
  }
  SUBCASE("attribute of attribute does not raise complexity") {
    const auto g = build_graph(sentence("darkgreen"));
    CHECK(facts(g) == std::set<Fact>{{"car", Relation::kHasAttr, "green"},
                                     {"green", Relation::kHasAttr, "dark"}});
    CHECK(complexity(g) == 1);
  }
  SUBCASE("empty parse") {
    const auto g = build_graph(DependencyParse{});
    CHECK(g.nodes.empty());
    CHECK(g.edges.empty());
    CHECK(complexity(g) == 0);
    CHECK(action_count(g) == 0);
  }
}

TEST_CASE("graph validation rejects broken typing") {
  SemanticGraph g;
  const auto a = g.add_node(NodeKind::kAttribute, "red", 0, 1);
  const auto o = g.add_node(NodeKind::kObject, "car", 1, 2);
  g.add_edge(o, Relation::kHasAttr, a);
  CHECK_NOTHROW(validate(g));
  SemanticGraph bad = g;
  bad.edges.push_back({a, Relation::kHasPart, o});
  CHECK_THROWS_AS(validate(bad), InputError);
  SemanticGraph orphan = g;
  orphan.edges.push_back({o, Relation::kIsActSubj, 7});
  CHECK_THROWS_AS(validate(orphan), InputError);
}

TEST_CASE("property: fixture graphs are valid, mirror-closed and match the complexity oracle") {
  for (const auto& key : testsupport::sentence_keys()) {
    CAPTURE(key);
    const auto g = build_graph(sentence(key));
    CHECK_NOTHROW(validate(g));
    CHECK(mirror_closed(g));
    CHECK(complexity(g) == oracle_complexity(g));
  }
}

TEST_CASE("property: random trees give valid graphs without excluded actions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p = random_parse(rng);
    const auto g = build_graph(p);
    REQUIRE_NOTHROW(validate(g));
    CHECK(mirror_closed(g));
    CHECK(complexity(g) == oracle_complexity(g));
    for (const auto& n : g.nodes) {
      if (n.kind == NodeKind::kAction) CHECK_FALSE(is_excluded_verb(n.lemma));
      if (n.kind == NodeKind::kObject) CHECK(p.tokens[n.span_begin].pos == Pos::kNoun);
    }
    CHECK(serialize(build_graph(p)) == serialize(g));
  }
}

TEST_CASE("property: adding a relation edge never lowers complexity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    auto g = build_graph(random_parse(rng));
    std::vector<std::size_t> objects, attrs, actions;
    for (const auto& n : g.nodes) {
      (n.kind == NodeKind::kObject ? objects
       : n.kind == NodeKind::kAttribute ? attrs : actions).push_back(n.id);
    }
    if (objects.empty()) continue;
    const auto before = complexity(g);
    const auto o = objects[rng() % objects.size()];
    switch (rng() % 3) {
      case 0: {
        const auto a = g.add_node(NodeKind::kAttribute, "extra", 0, 0);
        g.add_edge(o, Relation::kHasAttr, a);
        break;
      }
      case 1: {
        const auto p = g.add_node(NodeKind::kObject, "part", 0, 0);
        g.add_edge(o, Relation::kHasPart, p);
        break;
      }
      default: {
        const auto act = g.add_node(NodeKind::kAction, "act", 0, 0);
        g.add_edge(act, Relation::kActHasObj, o);
        break;
      }
    }
    CHECK_NOTHROW(validate(g));
    CHECK(complexity(g) >= before);
    CHECK(relation_count(g, o) >= 1);
  }
}
