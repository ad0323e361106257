#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vlcurate/error.hpp"

namespace vlcurate {

enum class Pos { kNoun, kPropn, kAdj, kVerb, kNum, kAdp, kDet, kOther };

Pos pos_from_upos(std::string_view upos);
std::string_view pos_name(Pos pos);

struct Token {
  std::string form;
  std::string lemma;
  Pos pos = Pos::kOther;
  // 0-based index of the head token; nullopt marks the root.
  std::optional<std::size_t> head;
  std::string deprel;
};

// One dependency-parsed sentence. Tokens are in surface order.
struct DependencyParse {
  std::vector<Token> tokens;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }

  // Indices of the tokens whose head is `index`, in surface order.
  std::vector<std::size_t> children(std::size_t index) const;
};

// A parse that is not a single-rooted tree. `token()` is the 0-based index of
// the token where the problem was detected.
class ParseError : public InputError {
 public:
  ParseError(std::size_t token, const std::string& what);
  std::size_t token() const { return token_; }

 private:
  std::size_t token_;
};

// Throws ParseError unless heads form a single-rooted, acyclic tree and every
// relation label is non-empty. An empty parse is valid.
void validate(const DependencyParse& parse);

// Reads one sentence block from CoNLL-U text (comment lines, multiword ranges
// and empty nodes are skipped). Throws InputError on malformed lines and
// ParseError on tree violations.
DependencyParse parse_conllu(std::string_view block);

// Reads blank-line separated blocks until EOF.
std::vector<DependencyParse> read_conllu(std::istream& in);

std::string to_conllu(const DependencyParse& parse);

}  // namespace vlcurate
