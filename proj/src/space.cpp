#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "affkb/errors.hpp"
#include "affkb/kernels.hpp"
#include "affkb/space.hpp"

namespace affkb::space {

using modality::IdPair;

std::vector<double> ModalitySpace::dense_row(int r) const {
  std::vector<double> out(cols.size(), 0.0);
  auto it = cells.lower_bound({r, 0});
  for (; it != cells.end() && it->first.a == r; ++it) {
    out[static_cast<std::size_t>(it->first.b)] = it->second;
  }
  return out;
}

std::vector<double> ModalitySpace::embedding(int r) const {
  if (!factors.has_value()) return dense_row(r);
  const Factors& f = *factors;
  std::vector<double> out(static_cast<std::size_t>(f.k));
  for (int i = 0; i < f.k; ++i) {
    out[static_cast<std::size_t>(i)] =
        f.u[static_cast<std::size_t>(r) * f.k + i] * f.sigma[static_cast<std::size_t>(i)];
  }
  return out;
}

ModalitySpace build_space(const modality::ModalityModel& model, SpaceRole role,
                          Weighting weighting) {
  const std::map<IdPair, double>& table =
      role == SpaceRole::Active ? model.active : model.passive;
  if (table.empty()) {
    throw InputError(std::string("empty space: no ") +
                     (role == SpaceRole::Active ? "active" : "passive") +
                     " evidence in the model");
  }
  ModalitySpace s;
  s.role = role;
  s.weighting = weighting;
  s.rows = role == SpaceRole::Active ? model.subjects : model.objects;
  s.cols = model.verbs;

  // The model keys active pairs as (subject, verb) and passive pairs as
  // (verb, object); rows are always the noun side here.
  auto cell_key = [&](IdPair k) {
    return role == SpaceRole::Active ? IdPair{k.a, k.b} : IdPair{k.b, k.a};
  };

  if (weighting == Weighting::Raw) {
    for (const auto& [k, w] : table) s.cells[cell_key(k)] = w;
    return s;
  }

  std::map<int, double> row_sum, col_sum;
  double total = 0.0;
  for (const auto& [k, w] : table) {
    IdPair rc = cell_key(k);
    row_sum[rc.a] += w;
    col_sum[rc.b] += w;
    total += w;
  }
  for (const auto& [k, w] : table) {
    IdPair rc = cell_key(k);
    double value = std::log(w * total / (row_sum.at(rc.a) * col_sum.at(rc.b)));
    if (value > 0.0) s.cells[rc] = value;
  }
  return s;
}

ModalitySpace truncated_svd(const ModalitySpace& space, int k, int iterations,
                            std::uint64_t seed) {
  const int rows = static_cast<int>(space.row_count());
  const int cols = static_cast<int>(space.col_count());
  if (k < 1 || k > std::min(rows, cols)) {
    throw InputError("svd rank " + std::to_string(k) + " out of range [1, " +
                     std::to_string(std::min(rows, cols)) + "]");
  }
  std::vector<double> dense(static_cast<std::size_t>(rows) * cols, 0.0);
  for (const auto& [rc, w] : space.cells) {
    dense[static_cast<std::size_t>(rc.a) * cols + rc.b] = w;
  }
  linalg::DenseSvd svd = linalg::truncated_svd(dense, rows, cols, k, iterations, seed);
  ModalitySpace out = space;
  out.factors = Factors{k, std::move(svd.u), std::move(svd.sigma), std::move(svd.vt)};
  return out;
}

namespace {

int require_row(const ModalitySpace& space, const std::string& noun) {
  int r = space.rows.find(noun);
  if (r < 0) throw UnknownEntityError(noun);
  return r;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double na = kernels::squared_norm(a);
  double nb = kernels::squared_norm(b);
  if (na <= 0.0 || nb <= 0.0) return 0.0;  // zero vector convention
  return kernels::dot(a, b) / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<Neighbor> rank_rows(const ModalitySpace& space,
                                std::span<const double> query, std::size_t k,
                                int exclude_row) {
  std::vector<Neighbor> all;
  for (int r = 0; r < static_cast<int>(space.row_count()); ++r) {
    if (r == exclude_row) continue;
    all.push_back({space.rows.at(r), cosine(query, space.embedding(r))});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& x, const Neighbor& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    return x.noun < y.noun;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace

double similarity(const ModalitySpace& space, const std::string& noun_a,
                  const std::string& noun_b) {
  int ra = require_row(space, noun_a);
  int rb = require_row(space, noun_b);
  return cosine(space.embedding(ra), space.embedding(rb));
}

std::vector<Neighbor> neighbors(const ModalitySpace& space, const std::string& noun,
                                std::size_t k) {
  int r = require_row(space, noun);
  return rank_rows(space, space.embedding(r), k, r);
}

Composition compose(const ModalitySpace& space, const std::vector<std::string>& nouns,
                    std::size_t k) {
  if (nouns.empty()) throw InputError("compose: empty noun list");
  std::vector<double> sum;
  for (const std::string& noun : nouns) {
    std::vector<double> e = space.embedding(require_row(space, noun));
    if (sum.empty()) {
      sum = std::move(e);
    } else {
      kernels::axpy(1.0, e, sum);
    }
  }
  double n2 = kernels::squared_norm(std::span<const double>(sum));
  if (n2 > 0.0) kernels::scale(sum, 1.0 / std::sqrt(n2));
  Composition out;
  out.nearest = rank_rows(space, sum, k, -1);
  out.vector = std::move(sum);
  return out;
}

namespace {

using nlohmann::json;

}  // namespace

std::string space_to_json(const ModalitySpace& space) {
  json j;
  j["format"] = "affkb-space";
  j["version"] = 1;
  j["role"] = space.role == SpaceRole::Active ? "active" : "passive";
  j["weighting"] = space.weighting == Weighting::Raw ? "raw" : "ppmi";
  j["rows"] = json(space.rows.entries());
  j["cols"] = json(space.cols.entries());
  json cells = json::array();
  for (const auto& [rc, w] : space.cells) cells.push_back(json::array({rc.a, rc.b, w}));
  j["cells"] = std::move(cells);
  if (space.factors.has_value()) {
    j["factors"] = {{"k", space.factors->k},
                    {"u", space.factors->u},
                    {"sigma", space.factors->sigma},
                    {"vt", space.factors->vt}};
  } else {
    j["factors"] = nullptr;
  }
  return j.dump(2);
}

ModalitySpace space_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("format", "") != "affkb-space") {
    throw InputError("not a space document");
  }
  if (j.at("version").get<int>() != 1) {
    throw InputError("unsupported space version " + j.at("version").dump());
  }
  ModalitySpace s;
  s.role = j.at("role").get<std::string>() == "active" ? SpaceRole::Active
                                                       : SpaceRole::Passive;
  s.weighting = j.at("weighting").get<std::string>() == "raw" ? Weighting::Raw
                                                              : Weighting::Ppmi;
  s.rows = modality::Vocab(s.role == SpaceRole::Active ? modality::Role::Subject
                                                       : modality::Role::Object);
  s.cols = modality::Vocab(modality::Role::Verb);
  for (const auto& e : j.at("rows")) s.rows.intern(e.get<std::string>());
  for (const auto& e : j.at("cols")) s.cols.intern(e.get<std::string>());
  for (const auto& e : j.at("cells")) {
    s.cells[{e.at(0).get<int>(), e.at(1).get<int>()}] = e.at(2).get<double>();
  }
  const json& f = j.at("factors");
  if (!f.is_null()) {
    s.factors = Factors{f.at("k").get<int>(), f.at("u").get<std::vector<double>>(),
                        f.at("sigma").get<std::vector<double>>(),
                        f.at("vt").get<std::vector<double>>()};
  }
  return s;
}

}  // namespace affkb::space
