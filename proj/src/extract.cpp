#include <map>
#include <set>

#include "affkb/extract.hpp"
#include "affkb/util.hpp"

namespace affkb::svo {

std::string lemma_of(const dep::Token& token) {
  if (token.lemma.empty() || token.lemma == "_") return ascii_lower(token.surface);
  return ascii_lower(token.lemma);
}

namespace {

bool is_conj(const std::string& relation) {
  return relation == "conj" || relation.starts_with("conj:");
}

bool noun_like(const dep::Token& t) {
  return t.upos == "NOUN" || t.upos == "PROPN";
}

}  // namespace

std::vector<SvoTriple> extract_triples(const dep::DepSentence& sentence,
                                       const ExtractConfig& config) {
  std::vector<SvoTriple> out;
  std::map<int, const dep::Token*> by_index;
  for (const dep::Token& t : sentence.tokens) by_index.emplace(t.index, &t);

  // head index -> outgoing edges, in input order
  std::map<int, std::vector<const dep::DepEdge*>> outgoing;
  for (const dep::DepEdge& e : sentence.edges) {
    outgoing[e.head].push_back(&e);
  }

  // Collect slot tokens attached to `head` by a relation in `labels`,
  // expanding conj chains when enabled. Order: base tokens by edge order,
  // each followed by its conjuncts.
  auto collect_slot = [&](int head, const std::set<std::string>& labels) {
    std::vector<const dep::Token*> slot;
    auto it = outgoing.find(head);
    if (it == outgoing.end()) return slot;
    for (const dep::DepEdge* e : it->second) {
      if (!labels.contains(e->relation)) continue;
      std::vector<int> frontier = {e->dependent};
      std::set<int> visited = {e->dependent};
      while (!frontier.empty()) {
        int idx = frontier.front();
        frontier.erase(frontier.begin());
        auto tok = by_index.find(idx);
        if (tok != by_index.end()) {
          if (!config.strict_pos || noun_like(*tok->second)) {
            slot.push_back(tok->second);
          }
        }
        if (!config.conj_expansion) continue;
        auto conj_it = outgoing.find(idx);
        if (conj_it == outgoing.end()) continue;
        for (const dep::DepEdge* c : conj_it->second) {
          if (is_conj(c->relation) && visited.insert(c->dependent).second) {
            frontier.push_back(c->dependent);
          }
        }
      }
    }
    return slot;
  };

  for (const dep::Token& verb : sentence.tokens) {
    const std::string verb_lemma = lemma_of(verb);
    if (config.verb_stoplist.contains(verb_lemma)) continue;
    if (config.drop_negated) {
      auto it = outgoing.find(verb.index);
      bool negated = false;
      if (it != outgoing.end()) {
        for (const dep::DepEdge* e : it->second) {
          if (config.negation_labels.contains(e->relation)) negated = true;
        }
      }
      if (negated) continue;
    }

    std::vector<const dep::Token*> subjects =
        collect_slot(verb.index, config.subject_labels);
    std::vector<const dep::Token*> objects =
        collect_slot(verb.index, config.object_labels);
    if (!subjects.empty() && !objects.empty()) {
      for (const dep::Token* s : subjects) {
        for (const dep::Token* o : objects) {
          out.push_back({lemma_of(*s), verb_lemma, lemma_of(*o), sentence.id, 1.0});
        }
      }
    }

    // Surface subjects of passive clauses are patients: object slot only.
    for (const dep::Token* p : collect_slot(verb.index, config.passive_labels)) {
      out.push_back({kPassiveSubject, verb_lemma, lemma_of(*p), sentence.id, 1.0});
    }
  }
  return out;
}

}  // namespace affkb::svo
