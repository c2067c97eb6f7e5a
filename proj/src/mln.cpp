#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <tuple>

#include "affkb/errors.hpp"
#include "affkb/mln.hpp"
#include "affkb/util.hpp"

namespace affkb::mln {

SchemaSet default_schema() {
  SchemaSet set;
  set.schemas = {
      {"SubjOf", {"S", "V"}},
      {"ObjOf", {"V", "O"}},
      {"CanDo", {"S", "V"}},
      {"Affords", {"O", "V"}},
  };
  // F1: !SubjOf(s,v) v CanDo(s,v)
  Formula f1;
  f1.weight = 1.0;
  f1.var_names = {"s", "v"};
  f1.var_domains = {"S", "V"};
  f1.clause = {{0, true, {0, 1}}, {2, false, {0, 1}}};
  // F2: !ObjOf(v,o) v Affords(o,v)
  Formula f2;
  f2.weight = 1.0;
  f2.var_names = {"v", "o"};
  f2.var_domains = {"V", "O"};
  f2.clause = {{1, true, {0, 1}}, {3, false, {1, 0}}};
  // F3: !SubjOf(s,v) v !ObjOf(v,o) v CanDo(s,v)
  Formula f3;
  f3.weight = 1.0;
  f3.var_names = {"s", "v", "o"};
  f3.var_domains = {"S", "V", "O"};
  f3.clause = {{0, true, {0, 1}}, {1, true, {1, 2}}, {2, false, {0, 1}}};
  set.formulas = {f1, f2, f3};
  return set;
}

std::map<std::string, std::vector<std::string>> domains_from_model(
    const modality::ModalityModel& model) {
  return {{"S", model.subjects.entries()},
          {"V", model.verbs.entries()},
          {"O", model.objects.entries()}};
}

int GroundModel::atom_id(const std::string& predicate, const std::string& c1,
                         const std::string& c2) const {
  for (std::size_t p = 0; p < schemas.size(); ++p) {
    if (schemas[p].name != predicate) continue;
    auto find_const = [&](const std::string& domain, const std::string& value) {
      const std::vector<std::string>& values = constants.at(domain);
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == value) return static_cast<int>(i);
      }
      return -1;
    };
    int i1 = find_const(schemas[p].domains[0], c1);
    int i2 = find_const(schemas[p].domains[1], c2);
    if (i1 < 0 || i2 < 0) return -1;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (atoms[a].predicate == static_cast<int>(p) && atoms[a].c1 == i1 &&
          atoms[a].c2 == i2) {
        return static_cast<int>(a);
      }
    }
  }
  return -1;
}

std::string GroundModel::atom_name(int id) const {
  const GroundAtom& a = atoms[static_cast<std::size_t>(id)];
  const PredicateSchema& schema = schemas[static_cast<std::size_t>(a.predicate)];
  return schema.name + "(" + constants.at(schema.domains[0])[static_cast<std::size_t>(a.c1)] +
         "," + constants.at(schema.domains[1])[static_cast<std::size_t>(a.c2)] + ")";
}

GroundModel ground(const std::vector<PredicateSchema>& schemas,
                   const std::vector<Formula>& formulas,
                   const std::map<std::string, std::vector<std::string>>& constants) {
  GroundModel gm;
  gm.schemas = schemas;
  gm.formulas = formulas;
  gm.constants = constants;

  // All ground atoms: schemas in order, second argument fastest.
  std::map<std::tuple<int, int, int>, int> atom_ids;
  for (std::size_t p = 0; p < schemas.size(); ++p) {
    for (const std::string& domain : schemas[p].domains) {
      if (constants.find(domain) == constants.end()) {
        throw InputError("predicate " + schemas[p].name + " uses unknown domain " + domain);
      }
    }
    int n1 = static_cast<int>(constants.at(schemas[p].domains[0]).size());
    int n2 = static_cast<int>(constants.at(schemas[p].domains[1]).size());
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) {
        atom_ids[{static_cast<int>(p), i, j}] = static_cast<int>(gm.atoms.size());
        gm.atoms.push_back({static_cast<int>(p), i, j});
      }
    }
  }

  // All groundings: variables in first-occurrence order, last one fastest.
  for (const Formula& f : formulas) {
    std::vector<int> domain_sizes;
    for (const std::string& domain : f.var_domains) {
      auto it = constants.find(domain);
      if (it == constants.end()) {
        throw InputError("formula variable over unknown domain " + domain);
      }
      domain_sizes.push_back(static_cast<int>(it->second.size()));
    }
    std::vector<GroundClause> clauses;
    std::vector<int> assignment(f.var_names.size(), 0);
    bool empty_domain = false;
    for (int size : domain_sizes) {
      if (size == 0) empty_domain = true;
    }
    if (!empty_domain) {
      while (true) {
        GroundClause gc;
        for (const Literal& lit : f.clause) {
          int i = assignment[static_cast<std::size_t>(lit.vars[0])];
          int j = assignment[static_cast<std::size_t>(lit.vars[1])];
          gc.lits.emplace_back(atom_ids.at({lit.predicate, i, j}), lit.negated);
        }
        clauses.push_back(std::move(gc));
        int pos = static_cast<int>(assignment.size()) - 1;
        while (pos >= 0) {
          if (++assignment[static_cast<std::size_t>(pos)] < domain_sizes[static_cast<std::size_t>(pos)]) break;
          assignment[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    }
    gm.groundings.push_back(std::move(clauses));
  }

  gm.incidence.assign(gm.atoms.size(), {});
  for (std::size_t fi = 0; fi < gm.groundings.size(); ++fi) {
    for (std::size_t ci = 0; ci < gm.groundings[fi].size(); ++ci) {
      for (const auto& [atom, negated] : gm.groundings[fi][ci].lits) {
        auto& list = gm.incidence[static_cast<std::size_t>(atom)];
        if (list.empty() || list.back() != std::make_pair(static_cast<int>(fi), static_cast<int>(ci))) {
          list.emplace_back(static_cast<int>(fi), static_cast<int>(ci));
        }
      }
    }
  }
  return gm;
}

namespace {

bool clause_satisfied(const GroundClause& clause, const World& world) {
  for (const auto& [atom, negated] : clause.lits) {
    bool value = world[static_cast<std::size_t>(atom)] != 0;
    if (value != negated) return true;
  }
  return false;
}

}  // namespace

int count_true_groundings(const GroundModel& gm, int formula, const World& world) {
  int count = 0;
  for (const GroundClause& clause : gm.groundings[static_cast<std::size_t>(formula)]) {
    if (clause_satisfied(clause, world)) ++count;
  }
  return count;
}

namespace {

double world_score(const GroundModel& gm, std::span<const double> weights,
                   const World& world) {
  double score = 0.0;
  for (std::size_t f = 0; f < gm.formulas.size(); ++f) {
    score += weights[f] * count_true_groundings(gm, static_cast<int>(f), world);
  }
  return score;
}

}  // namespace

double world_log_prob(const GroundModel& gm, std::span<const double> weights,
                      const World& world) {
  const std::size_t n = gm.atom_count();
  if (n > kExactAtomLimit) {
    throw InputError("exact log-probability is limited to " +
                     std::to_string(kExactAtomLimit) +
                     " ground atoms; use Gibbs inference");
  }
  if (world.size() != n) throw InputError("world does not cover every atom");

  double max_score = -HUGE_VAL;
  std::vector<double> scores;
  scores.reserve(static_cast<std::size_t>(1) << n);
  World w(n, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) w[i] = (mask >> i) & 1 ? 1 : 0;
    double s = world_score(gm, weights, w);
    scores.push_back(s);
    if (s > max_score) max_score = s;
  }
  double z = 0.0;
  for (double s : scores) z += std::exp(s - max_score);
  double log_z = max_score + std::log(z);
  return world_score(gm, weights, world) - log_z;
}

// -------- formula file --------

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool identifier(std::string& out) {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    if (pos == start) return false;
    out = std::string(text.substr(start, pos - start));
    return !std::isdigit(static_cast<unsigned char>(out[0]));
  }
};

int predicate_index(const std::vector<PredicateSchema>& schemas, const std::string& name) {
  for (std::size_t i = 0; i < schemas.size(); ++i) {
    if (schemas[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::string format_weight(double w) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<Formula> parse_formulas(const std::string& text,
                                    const std::vector<PredicateSchema>& schemas) {
  std::vector<Formula> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = trim(line);
    if (v.empty() || v[0] == '#') continue;
    auto fail = [&](const std::string& why) -> void {
      throw InputError("formula line " + std::to_string(lineno) + ": " + why);
    };

    std::size_t sep = v.find("::");
    if (sep == std::string_view::npos) fail("missing '::'");
    std::string weight_text(trim(v.substr(0, sep)));
    Formula f;
    {
      const char* first = weight_text.data();
      const char* last = weight_text.data() + weight_text.size();
      auto [ptr, ec] = std::from_chars(first, last, f.weight);
      if (ec != std::errc() || ptr != last) fail("bad weight '" + weight_text + "'");
    }

    Cursor cur{v.substr(sep + 2)};
    bool expect_literal = true;
    while (true) {
      cur.skip_ws();
      if (cur.pos >= cur.text.size()) break;
      if (!expect_literal) {
        std::string sep_tok;
        if (!cur.identifier(sep_tok) || sep_tok != "v") fail("expected 'v' between literals");
        expect_literal = true;
        continue;
      }
      Literal lit;
      if (cur.eat('!')) lit.negated = true;
      std::string pred;
      if (!cur.identifier(pred)) fail("expected predicate name");
      lit.predicate = predicate_index(schemas, pred);
      if (lit.predicate < 0) fail("unknown predicate '" + pred + "'");
      if (!cur.eat('(')) fail("expected '(' after " + pred);
      for (int arg = 0; arg < 2; ++arg) {
        std::string var;
        if (!cur.identifier(var)) fail("expected variable name");
        const std::string& domain =
            schemas[static_cast<std::size_t>(lit.predicate)].domains[static_cast<std::size_t>(arg)];
        int vi = -1;
        for (std::size_t i = 0; i < f.var_names.size(); ++i) {
          if (f.var_names[i] == var) vi = static_cast<int>(i);
        }
        if (vi < 0) {
          vi = static_cast<int>(f.var_names.size());
          f.var_names.push_back(var);
          f.var_domains.push_back(domain);
        } else if (f.var_domains[static_cast<std::size_t>(vi)] != domain) {
          fail("variable '" + var + "' used over domains " +
               f.var_domains[static_cast<std::size_t>(vi)] + " and " + domain);
        }
        lit.vars[static_cast<std::size_t>(arg)] = vi;
        if (arg == 0 && !cur.eat(',')) fail("expected ',' in " + pred + "(...)");
      }
      if (!cur.eat(')')) fail("expected ')'");
      f.clause.push_back(lit);
      expect_literal = false;
    }
    if (expect_literal || f.clause.empty()) fail("empty clause");
    out.push_back(std::move(f));
  }
  return out;
}

std::string format_formulas(const std::vector<Formula>& formulas,
                            const std::vector<PredicateSchema>& schemas) {
  std::ostringstream out;
  for (const Formula& f : formulas) {
    out << format_weight(f.weight) << " :: ";
    for (std::size_t i = 0; i < f.clause.size(); ++i) {
      if (i > 0) out << " v ";
      const Literal& lit = f.clause[i];
      if (lit.negated) out << '!';
      out << schemas[static_cast<std::size_t>(lit.predicate)].name << '('
          << f.var_names[static_cast<std::size_t>(lit.vars[0])] << ','
          << f.var_names[static_cast<std::size_t>(lit.vars[1])] << ')';
    }
    out << '\n';
  }
  return out.str();
}

Evidence parse_evidence(const std::string& text, const GroundModel& gm) {
  Evidence ev;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = trim(line);
    if (v.empty() || v[0] == '#') continue;
    bool value = true;
    if (v[0] == '!') {
      value = false;
      v.remove_prefix(1);
    }
    std::size_t open = v.find('(');
    std::size_t comma = v.find(',');
    if (open == std::string_view::npos || comma == std::string_view::npos ||
        v.back() != ')' || comma < open) {
      throw InputError("evidence line " + std::to_string(lineno) +
                       ": expected Pred(const,const)");
    }
    std::string pred(trim(v.substr(0, open)));
    std::string c1(trim(v.substr(open + 1, comma - open - 1)));
    std::string c2(trim(v.substr(comma + 1, v.size() - comma - 2)));
    int atom = gm.atom_id(pred, c1, c2);
    if (atom < 0) {
      throw InputError("evidence line " + std::to_string(lineno) + ": unknown atom " +
                       pred + "(" + c1 + "," + c2 + ")");
    }
    ev.values[atom] = value;
  }
  return ev;
}

// -------- model-derived evidence --------

namespace {

// Truth under the corpus counts: positive active mass for SubjOf/CanDo,
// positive passive mass for ObjOf/Affords. Confidences are smoothing-free,
// so this stays a pure count test.
bool atom_holds_in_model(const GroundModel& gm, const GroundAtom& atom,
                         const modality::ModalityModel& model) {
  const PredicateSchema& schema = gm.schemas[static_cast<std::size_t>(atom.predicate)];
  const std::string& c1 = gm.constants.at(schema.domains[0])[static_cast<std::size_t>(atom.c1)];
  const std::string& c2 = gm.constants.at(schema.domains[1])[static_cast<std::size_t>(atom.c2)];
  if (schema.name == "SubjOf" || schema.name == "CanDo") {
    return modality::can_do(model, c1, c2, 1.0).confidence > 0.0;
  }
  if (schema.name == "ObjOf") {
    return modality::affords(model, c2, c1, 1.0).confidence > 0.0;
  }
  if (schema.name == "Affords") {
    return modality::affords(model, c1, c2, 1.0).confidence > 0.0;
  }
  return false;
}

}  // namespace

World evidence_world_from_model(const GroundModel& gm,
                                const modality::ModalityModel& model) {
  World world(gm.atom_count(), 0);
  for (std::size_t a = 0; a < gm.atoms.size(); ++a) {
    world[a] = atom_holds_in_model(gm, gm.atoms[a], model) ? 1 : 0;
  }
  return world;
}

Evidence evidence_atoms_from_model(const GroundModel& gm,
                                   const modality::ModalityModel& model) {
  Evidence ev;
  for (std::size_t a = 0; a < gm.atoms.size(); ++a) {
    const std::string& name =
        gm.schemas[static_cast<std::size_t>(gm.atoms[a].predicate)].name;
    if (name != "SubjOf" && name != "ObjOf") continue;
    ev.values[static_cast<int>(a)] = atom_holds_in_model(gm, gm.atoms[a], model);
  }
  return ev;
}

}  // namespace affkb::mln
