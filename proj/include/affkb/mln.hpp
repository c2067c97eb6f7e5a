#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "affkb/model.hpp"

// A minimal Markov Logic Network over grounded grammar predicates: weighted
// clausal formulas, exhaustive grounding over finite domains, true-grounding
// counting, pseudo-likelihood weight learning, and exact or Gibbs marginal
// inference. Arity is fixed at 2 and quantifiers are implicit universals;
// that is all the grammar predicates need.
namespace affkb::mln {

// Exact enumeration is capped at 2^20 worlds.
inline constexpr int kExactAtomLimit = 20;

struct PredicateSchema {
  std::string name;
  std::array<std::string, 2> domains;  // domain names, e.g. {"S", "V"}

  bool operator==(const PredicateSchema&) const = default;
};

struct Literal {
  int predicate = 0;  // index into the schema list
  bool negated = false;
  std::array<int, 2> vars{};  // indexes into the formula's variable list

  bool operator==(const Literal&) const = default;
};

// A quantifier-free disjunction of literals over shared variables.
struct Formula {
  double weight = 1.0;
  std::vector<std::string> var_names;    // first-occurrence order
  std::vector<std::string> var_domains;  // parallel to var_names
  std::vector<Literal> clause;           // non-empty

  bool operator==(const Formula&) const = default;
};

struct SchemaSet {
  std::vector<PredicateSchema> schemas;
  std::vector<Formula> formulas;
};

// The fixed grammar-predicate schema: evidence predicates SubjOf(S,V) and
// ObjOf(V,O), query predicates CanDo(S,V) and Affords(O,V), and the three
// soft implications
//   F1: SubjOf(s,v) => CanDo(s,v)
//   F2: ObjOf(v,o)  => Affords(o,v)
//   F3: SubjOf(s,v) & ObjOf(v,o) => CanDo(s,v)
// in clausal form, initial weights 1.0.
SchemaSet default_schema();

// Domain constants harvested from the model vocabularies: S, V, O.
std::map<std::string, std::vector<std::string>> domains_from_model(
    const modality::ModalityModel& model);

struct GroundAtom {
  int predicate = 0;
  int c1 = 0;  // ordinal within the first argument domain
  int c2 = 0;
};

struct GroundClause {
  std::vector<std::pair<int, bool>> lits;  // (atom id, negated)
};

// Total truth assignment, one value per ground atom.
using World = std::vector<char>;

struct GroundModel {
  std::vector<PredicateSchema> schemas;
  std::vector<Formula> formulas;
  std::map<std::string, std::vector<std::string>> constants;  // domain -> values

  std::vector<GroundAtom> atoms;
  std::vector<std::vector<GroundClause>> groundings;  // per formula
  // atom id -> (formula, clause index) pairs for every clause mentioning it
  std::vector<std::vector<std::pair<int, int>>> incidence;

  std::size_t atom_count() const { return atoms.size(); }
  std::size_t grounding_count(int formula) const {
    return groundings[static_cast<std::size_t>(formula)].size();
  }
  // -1 when the atom does not exist
  int atom_id(const std::string& predicate, const std::string& c1,
              const std::string& c2) const;
  std::string atom_name(int id) const;  // "Pred(c1,c2)"
};

// Enumerates every ground atom and every formula grounding. Throws
// affkb::InputError for predicates or variables over unknown domains.
GroundModel ground(const std::vector<PredicateSchema>& schemas,
                   const std::vector<Formula>& formulas,
                   const std::map<std::string, std::vector<std::string>>& constants);

// Number of ground clauses of `formula` satisfied by the world.
int count_true_groundings(const GroundModel& gm, int formula, const World& world);

// log P(X = world) = sum_j w_j n_j(world) - log Z, with Z by exact
// enumeration. Requires atom_count() <= kExactAtomLimit; larger models must
// use Gibbs inference.
double world_log_prob(const GroundModel& gm, std::span<const double> weights,
                      const World& world);

struct LearnConfig {
  double learning_rate = 0.5;
  int max_iterations = 500;
  double gradient_tol = 1e-6;
};

// Pseudo-log-likelihood of the world minus l2*||w||^2, and its gradient.
double pll_objective(const GroundModel& gm, std::span<const double> weights,
                     const World& world, double l2);
std::vector<double> pll_gradient(const GroundModel& gm, std::span<const double> weights,
                                 const World& world, double l2);

// Gradient ascent on pll_objective from the formulas' initial weights.
// Deterministic; stops on gradient norm < tol or max_iterations. Throws
// when weights pass 1e6 in magnitude (suggesting a larger l2).
std::vector<double> learn_weights_pll(const GroundModel& gm, const World& evidence,
                                      double l2, const LearnConfig& config = {});

struct Evidence {
  std::map<int, bool> values;  // atom id -> truth
};

struct SamplerConfig {
  enum class Mode { Auto, Exact, Gibbs };
  Mode mode = Mode::Auto;
  int burn_in = 1000;
  int samples = 20000;
  std::uint64_t seed = 42;
};

// P(query_atom = true | evidence): exact conditional enumeration when the
// free-atom count allows it (Auto), otherwise seeded Gibbs sampling. The
// query atom must not be part of the evidence.
double infer_marginal(const GroundModel& gm, std::span<const double> weights,
                      int query_atom, const Evidence& evidence,
                      const SamplerConfig& config = {});

// Closed-world evidence for training: SubjOf/CanDo true where the model has
// active mass, ObjOf/Affords true where it has passive mass, false
// elsewhere.
World evidence_world_from_model(const GroundModel& gm,
                                const modality::ModalityModel& model);

// Query-time evidence: only the SubjOf/ObjOf atoms, closed-world; CanDo and
// Affords atoms stay free.
Evidence evidence_atoms_from_model(const GroundModel& gm,
                                   const modality::ModalityModel& model);

// Formula file: one clause per line, `weight :: literal [v literal]*`,
// literals `[!]Pred(var,var)`, `#` comments.
std::vector<Formula> parse_formulas(const std::string& text,
                                    const std::vector<PredicateSchema>& schemas);
std::string format_formulas(const std::vector<Formula>& formulas,
                            const std::vector<PredicateSchema>& schemas);

// Evidence file: one ground literal `[!]Pred(const,const)` per line,
// `#` comments.
Evidence parse_evidence(const std::string& text, const GroundModel& gm);

}  // namespace affkb::mln
