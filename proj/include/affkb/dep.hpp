#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Dependency-annotated sentence ingestion. Two carriers are supported:
// CoNLL-U (primary) and the textual "relation(head-H, dep-D)" line format
// (secondary). Parses are ingested, never produced: there is no tokenizer
// or tagger here.
namespace affkb::dep {

struct Token {
  int index = 0;         // 1-based position
  std::string surface;   // FORM column
  std::string lemma;     // effective lemma: LEMMA column, or lowercased FORM when "_"
  std::string upos;      // UPOS column verbatim ("_" when unannotated)

  // Raw CoNLL-U columns preserved for bit-exact serialization. lemma_raw is
  // the LEMMA column as read (may be "_" while lemma holds the fallback).
  std::string lemma_raw;
  std::string xpos = "_";
  std::string feats = "_";
  std::string deps = "_";
  std::string misc = "_";

  bool operator==(const Token&) const = default;
};

// Convenience for hand-built sentences in code: fills lemma_raw from lemma.
Token make_token(int index, std::string surface, std::string lemma,
                 std::string upos = "_");

struct DepEdge {
  int head = 0;          // token index, 0 for root
  int dependent = 0;     // token index
  std::string relation;  // lowercase label, subtype suffix kept (nsubj:pass)

  bool operator==(const DepEdge&) const = default;
};

struct DepSentence {
  std::string id;                     // "# sent_id" comment or ordinal
  std::vector<std::string> comments;  // leading "#" lines, verbatim
  std::vector<Token> tokens;          // ordered by index
  std::vector<DepEdge> edges;
  bool partial = false;  // some token has no incoming edge (gaps allowed)

  const Token* token_at(int index) const;  // nullptr when absent

  bool operator==(const DepSentence&) const = default;
};

struct ParseError {
  std::size_t line = 0;  // 1-based line number in the input stream
  std::string message;
};

struct ParseOptions {
  // Lenient mode records errors and skips the offending sentence; strict
  // mode stops at the first error. Corpora are noisy, so lenient is the
  // default.
  bool strict = false;
};

struct ParseResult {
  std::vector<DepSentence> sentences;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

// CoNLL-U reader: 10 tab-separated columns, '#' comments, blank-line
// sentence boundary. Multiword-token ranges ("1-2") and empty nodes ("1.1")
// are skipped. HEAD "_" means unannotated: no edge, the sentence is flagged
// partial. Every accepted sentence passes validate().
ParseResult parse_conllu(std::istream& in, const ParseOptions& opts = {});
ParseResult parse_conllu_text(const std::string& text, const ParseOptions& opts = {});

// Writes comments and the 10 columns back. ID, FORM, LEMMA, UPOS, HEAD and
// DEPREL round-trip bit-exact for inputs carrying lowercase relation labels
// (labels are normalized to lowercase at parse time); XPOS, FEATS, DEPS and
// MISC are preserved opaquely. Tokens without an incoming edge serialize as
// HEAD "_" DEPREL "_".
void serialize_conllu(const DepSentence& sentence, std::ostream& out);
std::string serialize_conllu(const std::vector<DepSentence>& sentences);

// Stanford-style reader: one "relation(headword-H, depword-D)" edge per
// line, blank line terminates a sentence. Tokens are reconstructed from the
// word-index pairs (lemma = lowercased word); index gaps are allowed and
// such sentences are flagged partial.
ParseResult parse_sd_lines(std::istream& in, const ParseOptions& opts = {});
ParseResult parse_sd_text(const std::string& text, const ParseOptions& opts = {});

// Returns one human-readable description per violated invariant; empty for
// a well-formed sentence. Never mutates the input.
std::vector<std::string> validate(const DepSentence& sentence);

}  // namespace affkb::dep
