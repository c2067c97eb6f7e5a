#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "affkb/dep.hpp"
#include "affkb/util.hpp"

namespace affkb::dep {

Token make_token(int index, std::string surface, std::string lemma,
                 std::string upos) {
  Token t;
  t.index = index;
  t.surface = std::move(surface);
  t.lemma = std::move(lemma);
  t.lemma_raw = t.lemma;
  t.upos = std::move(upos);
  return t;
}

const Token* DepSentence::token_at(int index) const {
  for (const Token& t : tokens) {
    if (t.index == index) return &t;
  }
  return nullptr;
}

std::vector<std::string> validate(const DepSentence& s) {
  std::vector<std::string> out;
  std::map<int, int> seen;  // token index -> count
  for (const Token& t : s.tokens) {
    if (t.index < 1) {
      out.push_back("token '" + t.surface + "' has index " +
                    std::to_string(t.index) + " < 1");
    }
    if (t.surface.empty()) {
      out.push_back("token " + std::to_string(t.index) + " has empty surface");
    }
    if (++seen[t.index] == 2) {
      out.push_back("token index " + std::to_string(t.index) +
                    " appears more than once");
    }
  }
  std::map<int, int> incoming;  // dependent -> edge count
  for (const DepEdge& e : s.edges) {
    if (e.dependent < 1 || seen.find(e.dependent) == seen.end()) {
      out.push_back("edge " + e.relation + " has dependent index " +
                    std::to_string(e.dependent) + " outside the token range");
      continue;
    }
    if (e.head != 0 && seen.find(e.head) == seen.end()) {
      out.push_back("edge " + e.relation + " has head index " +
                    std::to_string(e.head) + " outside the token range");
    }
    if ((e.head == 0) != (e.relation == "root")) {
      out.push_back("edge " + e.relation + "(" + std::to_string(e.head) + "," +
                    std::to_string(e.dependent) +
                    "): head 0 and relation 'root' must coincide");
    }
    if (++incoming[e.dependent] == 2) {
      out.push_back("token " + std::to_string(e.dependent) +
                    " has more than one incoming edge (tree property)");
    }
  }
  if (!s.partial) {
    for (const Token& t : s.tokens) {
      if (incoming.find(t.index) == incoming.end()) {
        out.push_back("token " + std::to_string(t.index) +
                      " has no incoming edge and the sentence is not partial");
      }
    }
  }
  return out;
}

namespace {

bool parse_int(std::string_view s, int& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// ID column classification: plain integer, multiword range "1-2", or empty
// node "1.1".
enum class IdKind { Plain, Range, EmptyNode, Bad };

IdKind classify_id(std::string_view s, int& index) {
  if (s.find('-') != std::string_view::npos) return IdKind::Range;
  if (s.find('.') != std::string_view::npos) return IdKind::EmptyNode;
  return parse_int(s, index) && index >= 1 ? IdKind::Plain : IdKind::Bad;
}

std::string sentence_id_from_comments(const std::vector<std::string>& comments,
                                      std::size_t ordinal) {
  for (const std::string& c : comments) {
    std::string_view v = trim(c);
    if (!v.starts_with("#")) continue;
    v.remove_prefix(1);
    v = trim(v);
    if (v.starts_with("sent_id")) {
      v.remove_prefix(7);
      v = trim(v);
      if (v.starts_with("=")) {
        v.remove_prefix(1);
        return std::string(trim(v));
      }
    }
  }
  return "s" + std::to_string(ordinal);
}

struct Block {
  std::vector<std::string> comments;
  std::vector<std::pair<std::size_t, std::string>> lines;  // line no, text
};

// Assembles one sentence from a block; on failure records the first error
// and returns false.
bool build_sentence(const Block& block, std::size_t ordinal, DepSentence& out,
                    ParseError& err) {
  out = DepSentence{};
  out.comments = block.comments;
  out.id = sentence_id_from_comments(block.comments, ordinal);
  struct PendingEdge {
    int head;
    int dependent;
    std::string relation;
  };
  std::vector<PendingEdge> pending;
  for (const auto& [lineno, text] : block.lines) {
    std::vector<std::string> cols = split(text, '\t');
    if (cols.size() != 10) {
      err = {lineno, "expected 10 tab-separated columns, got " +
                         std::to_string(cols.size())};
      return false;
    }
    int index = 0;
    switch (classify_id(cols[0], index)) {
      case IdKind::Range:
      case IdKind::EmptyNode:
        continue;  // multiword tokens and empty nodes are skipped
      case IdKind::Bad:
        err = {lineno, "ID column '" + cols[0] + "' is not a positive integer"};
        return false;
      case IdKind::Plain:
        break;
    }
    Token t;
    t.index = index;
    t.surface = cols[1];
    t.lemma_raw = cols[2];
    t.lemma = cols[2] == "_" ? ascii_lower(cols[1]) : cols[2];
    t.upos = cols[3];
    t.xpos = cols[4];
    t.feats = cols[5];
    t.deps = cols[8];
    t.misc = cols[9];
    if (t.surface.empty()) {
      err = {lineno, "FORM column is empty"};
      return false;
    }
    out.tokens.push_back(std::move(t));

    const std::string& head_col = cols[6];
    if (head_col == "_") {
      out.partial = true;  // unannotated head: no edge
      continue;
    }
    int head = 0;
    if (!parse_int(head_col, head) || head < 0) {
      err = {lineno, "HEAD column '" + head_col + "' is not a number"};
      return false;
    }
    pending.push_back({head, index, ascii_lower(cols[7])});
  }
  for (PendingEdge& e : pending) {
    out.edges.push_back({e.head, e.dependent, std::move(e.relation)});
  }
  if (!out.tokens.empty()) {
    std::vector<std::string> violations = validate(out);
    if (!violations.empty()) {
      err = {block.lines.front().first, "invalid sentence: " + violations.front()};
      return false;
    }
  }
  return true;
}

}  // namespace

ParseResult parse_conllu(std::istream& in, const ParseOptions& opts) {
  ParseResult result;
  Block block;
  std::size_t lineno = 0;
  std::size_t ordinal = 0;
  bool aborted = false;

  auto flush = [&]() {
    if (block.comments.empty() && block.lines.empty()) return;
    Block current = std::move(block);
    block = Block{};
    if (current.lines.empty()) return;  // comment-only block
    ++ordinal;
    DepSentence s;
    ParseError err;
    if (build_sentence(current, ordinal, s, err)) {
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
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      block.comments.push_back(line);
      continue;
    }
    block.lines.emplace_back(lineno, line);
  }
  if (!aborted) flush();
  return result;
}

ParseResult parse_conllu_text(const std::string& text, const ParseOptions& opts) {
  std::istringstream in(text);
  return parse_conllu(in, opts);
}

void serialize_conllu(const DepSentence& s, std::ostream& out) {
  for (const std::string& c : s.comments) out << c << '\n';
  // incoming edge per token index
  std::map<int, const DepEdge*> incoming;
  for (const DepEdge& e : s.edges) incoming[e.dependent] = &e;
  for (const Token& t : s.tokens) {
    out << t.index << '\t' << t.surface << '\t' << t.lemma_raw << '\t' << t.upos
        << '\t' << t.xpos << '\t' << t.feats << '\t';
    auto it = incoming.find(t.index);
    if (it == incoming.end()) {
      out << "_\t_";
    } else {
      out << it->second->head << '\t' << it->second->relation;
    }
    out << '\t' << t.deps << '\t' << t.misc << '\n';
  }
  out << '\n';
}

std::string serialize_conllu(const std::vector<DepSentence>& sentences) {
  std::ostringstream out;
  for (const DepSentence& s : sentences) serialize_conllu(s, out);
  return out.str();
}

}  // namespace affkb::dep
