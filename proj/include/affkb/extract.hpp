#pragma once

#include <set>
#include <string>
#include <vector>

#include "affkb/dep.hpp"

// Turns dependency sentences into ability-modality SVO triples: "a robot
// builds a desk" is evidence that a robot can build and that a desk is
// buildable. Passive subjects ("desks are built") carry only the patient
// half of that claim, so they are emitted with the reserved subject
// placeholder and counted only toward the passive table downstream.
namespace affkb::svo {

// Reserved subject marker for passive-only evidence (U+22A5). Never enters
// the subject vocabulary.
inline const std::string kPassiveSubject = "\xE2\x8A\xA5";

struct SvoTriple {
  std::string subject;  // lowercase lemma, or kPassiveSubject
  std::string verb;     // lowercase lemma
  std::string object;   // lowercase lemma
  std::string source;   // sentence id
  double weight = 1.0;

  bool operator==(const SvoTriple&) const = default;
};

struct ExtractConfig {
  std::set<std::string> subject_labels = {"nsubj"};
  std::set<std::string> object_labels = {"dobj", "obj"};
  std::set<std::string> passive_labels = {"nsubjpass", "nsubj:pass"};
  // Copular/auxiliary lemmas whose clauses carry no ability evidence.
  std::set<std::string> verb_stoplist = {"be", "have", "do"};
  // Expand conj edges on subject/object tokens ("the door and the drawer").
  bool conj_expansion = true;
  // Require UPOS NOUN/PROPN on subject/object tokens. Off by default: the
  // Stanford line format carries no POS at all.
  bool strict_pos = false;
  // Skip verbs carrying a negation edge. Off by default.
  bool drop_negated = false;
  std::set<std::string> negation_labels = {"neg"};

  bool operator==(const ExtractConfig&) const = default;
};

// Effective lowercase lemma: token.lemma unless empty or "_", else the
// lowercased surface. Deterministic.
std::string lemma_of(const dep::Token& token);

// Emits, for every verb with at least one subject and one object edge, the
// cross product of subject and object lemmas; passive subjects become
// (kPassiveSubject, verb, noun) pairs. Unmatched sentences yield an empty
// list. Output order is deterministic (verbs by index, slots by index).
std::vector<SvoTriple> extract_triples(const dep::DepSentence& sentence,
                                       const ExtractConfig& config = {});

}  // namespace affkb::svo
