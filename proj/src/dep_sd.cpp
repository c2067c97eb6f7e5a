#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "affkb/dep.hpp"
#include "affkb/util.hpp"

namespace affkb::dep {

namespace {

struct SdEdge {
  std::string relation;
  std::string head_word;
  int head = 0;
  std::string dep_word;
  int dep = 0;
};

// "relation(headword-H, depword-D)". Words may contain '-'; the index is
// whatever follows the last '-'.
bool parse_sd_edge(std::string_view line, SdEdge& out) {
  std::size_t open = line.find('(');
  if (open == std::string_view::npos || line.back() != ')') return false;
  std::string_view rel = trim(line.substr(0, open));
  if (rel.empty()) return false;
  std::string_view args = line.substr(open + 1, line.size() - open - 2);
  std::size_t comma = args.find(',');
  if (comma == std::string_view::npos) return false;

  auto parse_word_index = [](std::string_view arg, std::string& word, int& index) {
    arg = trim(arg);
    std::size_t dash = arg.rfind('-');
    if (dash == std::string_view::npos || dash == 0 || dash + 1 == arg.size()) {
      return false;
    }
    std::string_view num = arg.substr(dash + 1);
    // Stanford prints copies as e.g. "word-3'"; strip trailing quotes.
    while (!num.empty() && num.back() == '\'') num.remove_suffix(1);
    if (num.empty()) return false;
    int value = 0;
    for (char c : num) {
      if (c < '0' || c > '9') return false;
      value = value * 10 + (c - '0');
    }
    word = std::string(arg.substr(0, dash));
    index = value;
    return !word.empty();
  };

  if (!parse_word_index(args.substr(0, comma), out.head_word, out.head)) return false;
  if (!parse_word_index(args.substr(comma + 1), out.dep_word, out.dep)) return false;
  if (out.dep < 1) return false;
  out.relation = ascii_lower(rel);
  return true;
}

struct SdBlock {
  std::size_t first_line = 0;
  std::vector<std::pair<std::size_t, SdEdge>> edges;
};

bool build_sd_sentence(const SdBlock& block, std::size_t ordinal,
                       DepSentence& out, ParseError& err) {
  out = DepSentence{};
  out.id = "s" + std::to_string(ordinal);
  std::map<int, std::string> words;       // index -> surface
  std::map<int, const SdEdge*> incoming;  // dependent -> first edge seen
  for (const auto& [lineno, e] : block.edges) {
    for (const auto& [word, index] :
         {std::pair<const std::string&, int>{e.head_word, e.head},
          std::pair<const std::string&, int>{e.dep_word, e.dep}}) {
      if (index == 0) continue;  // ROOT-0 pseudo-token
      auto [it, inserted] = words.emplace(index, word);
      if (!inserted && it->second != word) {
        err = {lineno, "token index " + std::to_string(index) +
                           " names both '" + it->second + "' and '" + word + "'"};
        return false;
      }
    }
    auto it = incoming.find(e.dep);
    if (it != incoming.end()) {
      const SdEdge& prev = *it->second;
      if (prev.head == e.head && prev.relation == e.relation) continue;  // duplicate line
      err = {lineno, "dependent index " + std::to_string(e.dep) +
                         " already attached to head " + std::to_string(prev.head)};
      return false;
    }
    incoming.emplace(e.dep, &e);
  }
  for (const auto& [index, word] : words) {
    Token t = make_token(index, word, ascii_lower(word));
    out.tokens.push_back(std::move(t));
  }
  for (const auto& [lineno, e] : block.edges) {
    if (incoming.at(e.dep) != &e) continue;  // collapsed duplicate
    out.edges.push_back({e.head, e.dep, e.relation});
  }
  out.partial = std::any_of(out.tokens.begin(), out.tokens.end(),
                            [&](const Token& t) {
                              return incoming.find(t.index) == incoming.end();
                            });
  std::vector<std::string> violations = validate(out);
  if (!violations.empty()) {
    err = {block.first_line, "invalid sentence: " + violations.front()};
    return false;
  }
  return true;
}

}  // namespace

ParseResult parse_sd_lines(std::istream& in, const ParseOptions& opts) {
  ParseResult result;
  SdBlock block;
  std::size_t lineno = 0;
  std::size_t ordinal = 0;
  bool aborted = false;
  bool block_bad = false;

  auto flush = [&]() {
    SdBlock current = std::move(block);
    bool bad = block_bad;
    block = SdBlock{};
    block_bad = false;
    if (current.edges.empty() || bad) return;
    ++ordinal;
    DepSentence s;
    ParseError err;
    if (build_sd_sentence(current, ordinal, s, err)) {
      result.sentences.push_back(std::move(s));
    } else {
      result.errors.push_back(err);
      if (opts.strict) aborted = true;
    }
  };

  std::string line;
  while (!aborted && std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view v = trim(line);
    if (v.empty()) {
      flush();
      continue;
    }
    if (v[0] == '#') continue;
    SdEdge e;
    if (!parse_sd_edge(v, e)) {
      result.errors.push_back({lineno, "unparseable line: '" + std::string(v) + "'"});
      block_bad = true;  // drop the rest of this sentence
      if (opts.strict) aborted = true;
      continue;
    }
    if (block.edges.empty()) block.first_line = lineno;
    block.edges.emplace_back(lineno, std::move(e));
  }
  if (!aborted) flush();
  return result;
}

ParseResult parse_sd_text(const std::string& text, const ParseOptions& opts) {
  std::istringstream in(text);
  return parse_sd_lines(in, opts);
}

}  // namespace affkb::dep
