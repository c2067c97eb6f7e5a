#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "affkb/model.hpp"
#include "affkb/svd.hpp"

// The two dual vector spaces induced from the count model: nouns as rows
// (subjects for the active space, objects for the passive one), verbs as
// columns. Raw counts or PPMI weights form the ground representation;
// truncated SVD factors are an optional densification sharing the same
// query interface.
namespace affkb::space {

enum class SpaceRole { Active, Passive };
enum class Weighting { Raw, Ppmi };

struct Factors {
  int k = 0;
  std::vector<double> u;      // rows x k, row-major
  std::vector<double> sigma;  // k, descending
  std::vector<double> vt;     // k x cols, row-major

  bool operator==(const Factors&) const = default;
};

struct ModalitySpace {
  SpaceRole role = SpaceRole::Active;
  modality::Vocab rows{modality::Role::Subject};
  modality::Vocab cols{modality::Role::Verb};
  std::map<modality::IdPair, double> cells;  // (row, col) -> weight >= 0
  Weighting weighting = Weighting::Raw;
  std::optional<Factors> factors;

  std::size_t row_count() const { return rows.size(); }
  std::size_t col_count() const { return cols.size(); }

  // Dense row in column space (ignores factors).
  std::vector<double> dense_row(int r) const;
  // Row representation used by similarity queries: u_r scaled by sigma when
  // factors exist, the dense raw/PPMI row otherwise.
  std::vector<double> embedding(int r) const;

  bool operator==(const ModalitySpace& other) const {
    return role == other.role && rows == other.rows && cols == other.cols &&
           cells == other.cells && weighting == other.weighting &&
           factors == other.factors;
  }
};

// Throws affkb::InputError("empty space ...") when the chosen role has no
// evidence. PPMI cells are max(0, log P(a,b)/(P(a)P(b))) with P taken from
// the role's count table; zero cells are not stored.
ModalitySpace build_space(const modality::ModalityModel& model, SpaceRole role,
                          Weighting weighting);

// Returns a copy of the space carrying rank-k factors. 1 <= k <=
// min(rows, cols); deterministic for a fixed seed.
ModalitySpace truncated_svd(const ModalitySpace& space, int k, int iterations,
                            std::uint64_t seed);

// Cosine of the two row representations; 0 when either is a zero vector.
// Unknown nouns raise affkb::UnknownEntityError.
double similarity(const ModalitySpace& space, const std::string& noun_a,
                  const std::string& noun_b);

struct Neighbor {
  std::string noun;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

// Top-k other rows by descending similarity, ties broken by lexicographic
// noun order.
std::vector<Neighbor> neighbors(const ModalitySpace& space, const std::string& noun,
                                std::size_t k);

struct Composition {
  std::vector<double> vector;  // L2-normalized sum of row representations
  std::vector<Neighbor> nearest;
};

// Additive composition of the named rows plus its nearest existing rows
// (the inputs themselves are eligible).
Composition compose(const ModalitySpace& space, const std::vector<std::string>& nouns,
                    std::size_t k = 5);

std::string space_to_json(const ModalitySpace& space);
ModalitySpace space_from_json(const std::string& text);

}  // namespace affkb::space
