#include "vlcurate/conllu.hpp"

#include <charconv>
#include <sstream>

namespace vlcurate {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_index(std::string_view text, std::size_t& value) {
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

Pos pos_from_upos(std::string_view upos) {
  if (upos == "NOUN") return Pos::kNoun;
  if (upos == "PROPN") return Pos::kPropn;
  if (upos == "ADJ") return Pos::kAdj;
  if (upos == "VERB") return Pos::kVerb;
  if (upos == "NUM") return Pos::kNum;
  if (upos == "ADP") return Pos::kAdp;
  if (upos == "DET") return Pos::kDet;
  return Pos::kOther;
}

std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::kNoun: return "NOUN";
    case Pos::kPropn: return "PROPN";
    case Pos::kAdj: return "ADJ";
    case Pos::kVerb: return "VERB";
    case Pos::kNum: return "NUM";
    case Pos::kAdp: return "ADP";
    case Pos::kDet: return "DET";
    case Pos::kOther: return "X";
  }
  return "X";
}

std::vector<std::size_t> DependencyParse::children(std::size_t index) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].head == index) out.push_back(i);
  }
  return out;
}

ParseError::ParseError(std::size_t token, const std::string& what)
    : InputError("token " + std::to_string(token + 1) + ": " + what),
      token_(token) {}

void validate(const DependencyParse& parse) {
  const std::size_t n = parse.tokens.size();
  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < n; ++i) {
    const Token& tok = parse.tokens[i];
    if (tok.deprel.empty()) throw ParseError(i, "empty dependency relation");
    if (!tok.head) {
      if (root) throw ParseError(i, "second root (first at token " +
                                        std::to_string(*root + 1) + ")");
      root = i;
    } else if (*tok.head >= n) {
      throw ParseError(i, "head index out of range");
    } else if (*tok.head == i) {
      throw ParseError(i, "token is its own head");
    }
  }
  if (n == 0) return;
  if (!root) throw ParseError(0, "no root token");

  // 0 = unvisited, 1 = on current path, 2 = reaches root.
  std::vector<int> state(n, 0);
  state[*root] = 2;
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::size_t> path;
    std::size_t cur = start;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = *parse.tokens[cur].head;
    }
    if (state[cur] == 1) throw ParseError(cur, "cycle in head links");
    for (std::size_t t : path) state[t] = 2;
  }
}

DependencyParse parse_conllu(std::string_view block) {
  DependencyParse parse;
  std::size_t line_no = 0;
  for (std::string_view raw : split(block, '\n')) {
    ++line_no;
    const std::string_view line = trim_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 10) {
      throw InputError("conllu line " + std::to_string(line_no) +
                       ": expected 10 tab-separated fields, got " +
                       std::to_string(fields.size()));
    }
    std::size_t id = 0;
    if (!parse_index(fields[0], id)) {
      // Multiword ranges (1-2) and empty nodes (1.1) carry no tree position.
      if (fields[0].find_first_of("-.") != std::string_view::npos) continue;
      throw InputError("conllu line " + std::to_string(line_no) +
                       ": bad token id '" + std::string(fields[0]) + "'");
    }
    if (id != parse.tokens.size() + 1) {
      throw InputError("conllu line " + std::to_string(line_no) +
                       ": token ids must be consecutive from 1");
    }
    std::size_t head = 0;
    if (!parse_index(fields[6], head)) {
      throw InputError("conllu line " + std::to_string(line_no) +
                       ": bad head '" + std::string(fields[6]) + "'");
    }
    Token tok;
    tok.form = std::string(fields[1]);
    tok.lemma = fields[2] == "_" ? tok.form : std::string(fields[2]);
    tok.pos = pos_from_upos(fields[3]);
    if (head > 0) tok.head = head - 1;
    tok.deprel = fields[7] == "_" ? std::string() : std::string(fields[7]);
    parse.tokens.push_back(std::move(tok));
  }
  validate(parse);
  return parse;
}

std::vector<DependencyParse> read_conllu(std::istream& in) {
  std::vector<DependencyParse> out;
  std::string block;
  std::string line;
  auto flush = [&] {
    if (block.find_first_not_of(" \t\r\n") != std::string::npos) {
      out.push_back(parse_conllu(block));
    }
    block.clear();
  };
  while (std::getline(in, line)) {
    if (trim_cr(line).empty()) {
      flush();
    } else {
      block += line;
      block += '\n';
    }
  }
  flush();
  return out;
}

std::string to_conllu(const DependencyParse& parse) {
  std::ostringstream os;
  for (std::size_t i = 0; i < parse.tokens.size(); ++i) {
    const Token& t = parse.tokens[i];
    os << (i + 1) << '\t' << t.form << '\t' << t.lemma << '\t'
       << pos_name(t.pos) << "\t_\t_\t" << (t.head ? *t.head + 1 : 0) << '\t'
       << (t.deprel.empty() ? "_" : t.deprel) << "\t_\t_\n";
  }
  return os.str();
}

}  // namespace vlcurate
