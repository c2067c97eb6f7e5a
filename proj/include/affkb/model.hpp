#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "affkb/extract.hpp"

// Count tables over extracted triples and the probability views on them:
// the joint distribution over (subject, verb, object) and the two dual
// tables over (subject, verb) and (verb, object). Counts are reals so
// corpus weighting schemes can be layered on later.
namespace affkb::modality {

enum class Role { Subject, Verb, Object };

class Vocab {
 public:
  explicit Vocab(Role role = Role::Subject) : role_(role) {}

  int intern(const std::string& lemma);
  // -1 when absent
  int find(const std::string& lemma) const;
  const std::string& at(int i) const { return entries_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::string>& entries() const { return entries_; }
  Role role() const { return role_; }

  bool operator==(const Vocab& other) const {
    return role_ == other.role_ && entries_ == other.entries_;
  }

 private:
  Role role_;
  std::vector<std::string> entries_;
  std::unordered_map<std::string, int> index_;
};

struct FilterConfig {
  double min_count = 0.0;
  std::optional<double> min_pmi;  // disabled when absent

  bool operator==(const FilterConfig&) const = default;
};

struct IdPair {
  int a = 0;
  int b = 0;
  auto operator<=>(const IdPair&) const = default;
};

struct IdTriple {
  int s = 0;
  int v = 0;
  int o = 0;
  auto operator<=>(const IdTriple&) const = default;
};

struct Verdict {
  bool value = false;
  double confidence = 0.0;
};

struct ModalityModel {
  Vocab subjects{Role::Subject};
  Vocab verbs{Role::Verb};
  Vocab objects{Role::Object};

  // Real-subject triples only; passive-only evidence never appears here.
  std::map<IdTriple, double> joint;
  std::map<IdPair, double> active;         // (subject, verb)
  std::map<IdPair, double> passive;        // (verb, object), extra included
  std::map<IdPair, double> passive_extra;  // the passive-only share of passive
  double total_joint = 0.0;
  double total_active = 0.0;
  double total_passive = 0.0;

  double smoothing_k = 0.0;
  FilterConfig filter;

  // Derived row/column sums for the conditional queries; rebuilt by
  // finalize(), excluded from equality.
  std::vector<double> subject_totals;  // per subject id
  std::vector<double> object_totals;   // per object id

  // Recomputes the derived sums by iterating the sorted tables, so the
  // result is identical whether the model was built or loaded.
  void finalize();

  bool operator==(const ModalityModel& other) const;
};

// Accumulates triples in input order. Triples with the passive placeholder
// subject touch only the passive table and total.
ModalityModel build_model(const std::vector<svo::SvoTriple>& triples,
                          double smoothing_k = 0.0, FilterConfig filter = {});

// Equals build_model over the concatenation of both inputs (bit-exact for
// integer-valued weights; floating-point association may differ otherwise).
ModalityModel merge_models(const ModalityModel& a, const ModalityModel& b);

// Unknown lemmas are allowed and lie outside the smoothed event space, so
// they yield probability 0 for every k.
double joint_prob(const ModalityModel& m, const std::string& s,
                  const std::string& v, const std::string& o);
double active_prob(const ModalityModel& m, const std::string& s,
                   const std::string& v);
double passive_prob(const ModalityModel& m, const std::string& v,
                    const std::string& o);

// Conditional verdicts: P(v | s) over active counts and P(v | o) over
// passive counts. Conditioning, not the joint, so frequent entities are not
// penalized. An unseen entity yields confidence 0, false.
Verdict can_do(const ModalityModel& m, const std::string& s,
               const std::string& v, double threshold);
Verdict affords(const ModalityModel& m, const std::string& o,
                const std::string& v, double threshold);

// Drops joint entries below min_count, then (when min_pmi is set) pairs
// whose pointwise mutual information under the current tables falls below
// the threshold, iterating to a fixpoint so the operation is idempotent.
// Vocabularies are rebuilt from the survivors; the input is untouched.
ModalityModel filter_outliers(const ModalityModel& m, double min_count,
                              std::optional<double> min_pmi);

// Marginal-consistency and total checks; empty when all invariants hold.
std::vector<std::string> consistency_errors(const ModalityModel& m);

std::string model_to_json(const ModalityModel& m);
ModalityModel model_from_json(const std::string& text);

}  // namespace affkb::modality
