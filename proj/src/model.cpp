#include <cmath>
#include <set>

#include <json.hpp>

#include "affkb/errors.hpp"
#include "affkb/model.hpp"

namespace affkb::modality {

int Vocab::intern(const std::string& lemma) {
  auto it = index_.find(lemma);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(entries_.size());
  entries_.push_back(lemma);
  index_.emplace(lemma, id);
  return id;
}

int Vocab::find(const std::string& lemma) const {
  auto it = index_.find(lemma);
  return it == index_.end() ? -1 : it->second;
}

void ModalityModel::finalize() {
  subject_totals.assign(subjects.size(), 0.0);
  object_totals.assign(objects.size(), 0.0);
  for (const auto& [key, w] : active) {
    subject_totals[static_cast<std::size_t>(key.a)] += w;
  }
  for (const auto& [key, w] : passive) {
    object_totals[static_cast<std::size_t>(key.b)] += w;
  }
}

bool ModalityModel::operator==(const ModalityModel& other) const {
  return subjects == other.subjects && verbs == other.verbs &&
         objects == other.objects && joint == other.joint &&
         active == other.active && passive == other.passive &&
         passive_extra == other.passive_extra &&
         total_joint == other.total_joint &&
         total_active == other.total_active &&
         total_passive == other.total_passive &&
         smoothing_k == other.smoothing_k && filter == other.filter;
}

ModalityModel build_model(const std::vector<svo::SvoTriple>& triples,
                          double smoothing_k, FilterConfig filter) {
  ModalityModel m;
  m.smoothing_k = smoothing_k;
  m.filter = filter;
  for (const svo::SvoTriple& t : triples) {
    int v = m.verbs.intern(t.verb);
    int o = m.objects.intern(t.object);
    if (t.subject == svo::kPassiveSubject) {
      m.passive[{v, o}] += t.weight;
      m.passive_extra[{v, o}] += t.weight;
      m.total_passive += t.weight;
      continue;
    }
    int s = m.subjects.intern(t.subject);
    m.joint[{s, v, o}] += t.weight;
    m.active[{s, v}] += t.weight;
    m.passive[{v, o}] += t.weight;
    m.total_joint += t.weight;
    m.total_active += t.weight;
    m.total_passive += t.weight;
  }
  m.finalize();
  return m;
}

ModalityModel merge_models(const ModalityModel& a, const ModalityModel& b) {
  ModalityModel m = a;
  std::vector<int> smap(b.subjects.size()), vmap(b.verbs.size()), omap(b.objects.size());
  for (std::size_t i = 0; i < b.subjects.size(); ++i) {
    smap[i] = m.subjects.intern(b.subjects.at(static_cast<int>(i)));
  }
  for (std::size_t i = 0; i < b.verbs.size(); ++i) {
    vmap[i] = m.verbs.intern(b.verbs.at(static_cast<int>(i)));
  }
  for (std::size_t i = 0; i < b.objects.size(); ++i) {
    omap[i] = m.objects.intern(b.objects.at(static_cast<int>(i)));
  }
  for (const auto& [k, w] : b.joint) {
    m.joint[{smap[static_cast<std::size_t>(k.s)], vmap[static_cast<std::size_t>(k.v)],
             omap[static_cast<std::size_t>(k.o)]}] += w;
  }
  for (const auto& [k, w] : b.active) {
    m.active[{smap[static_cast<std::size_t>(k.a)], vmap[static_cast<std::size_t>(k.b)]}] += w;
  }
  for (const auto& [k, w] : b.passive) {
    m.passive[{vmap[static_cast<std::size_t>(k.a)], omap[static_cast<std::size_t>(k.b)]}] += w;
  }
  for (const auto& [k, w] : b.passive_extra) {
    m.passive_extra[{vmap[static_cast<std::size_t>(k.a)], omap[static_cast<std::size_t>(k.b)]}] += w;
  }
  m.total_joint += b.total_joint;
  m.total_active += b.total_active;
  m.total_passive += b.total_passive;
  m.finalize();
  return m;
}

namespace {

double lookup(const std::map<IdPair, double>& table, IdPair key) {
  auto it = table.find(key);
  return it == table.end() ? 0.0 : it->second;
}

double smoothed(double count, double total, double k, double event_space) {
  if (k > 0.0) {
    double denom = total + k * event_space;
    return denom > 0.0 ? (count + k) / denom : 0.0;
  }
  return total > 0.0 ? count / total : 0.0;
}

}  // namespace

double joint_prob(const ModalityModel& m, const std::string& s,
                  const std::string& v, const std::string& o) {
  int si = m.subjects.find(s), vi = m.verbs.find(v), oi = m.objects.find(o);
  if (si < 0 || vi < 0 || oi < 0) return 0.0;
  auto it = m.joint.find({si, vi, oi});
  double count = it == m.joint.end() ? 0.0 : it->second;
  return smoothed(count, m.total_joint, m.smoothing_k,
                  static_cast<double>(m.subjects.size()) * static_cast<double>(m.verbs.size()) *
                      static_cast<double>(m.objects.size()));
}

double active_prob(const ModalityModel& m, const std::string& s,
                   const std::string& v) {
  int si = m.subjects.find(s), vi = m.verbs.find(v);
  if (si < 0 || vi < 0) return 0.0;
  return smoothed(lookup(m.active, {si, vi}), m.total_active, m.smoothing_k,
                  static_cast<double>(m.subjects.size()) * static_cast<double>(m.verbs.size()));
}

double passive_prob(const ModalityModel& m, const std::string& v,
                    const std::string& o) {
  int vi = m.verbs.find(v), oi = m.objects.find(o);
  if (vi < 0 || oi < 0) return 0.0;
  return smoothed(lookup(m.passive, {vi, oi}), m.total_passive, m.smoothing_k,
                  static_cast<double>(m.verbs.size()) * static_cast<double>(m.objects.size()));
}

Verdict can_do(const ModalityModel& m, const std::string& s,
               const std::string& v, double threshold) {
  int si = m.subjects.find(s);
  if (si < 0 || m.subject_totals[static_cast<std::size_t>(si)] <= 0.0) {
    return {false, 0.0};
  }
  int vi = m.verbs.find(v);
  double count = vi < 0 ? 0.0 : lookup(m.active, {si, vi});
  double conf = count / m.subject_totals[static_cast<std::size_t>(si)];
  return {conf >= threshold, conf};
}

Verdict affords(const ModalityModel& m, const std::string& o,
                const std::string& v, double threshold) {
  int oi = m.objects.find(o);
  if (oi < 0 || m.object_totals[static_cast<std::size_t>(oi)] <= 0.0) {
    return {false, 0.0};
  }
  int vi = m.verbs.find(v);
  double count = vi < 0 ? 0.0 : lookup(m.passive, {vi, oi});
  double conf = count / m.object_totals[static_cast<std::size_t>(oi)];
  return {conf >= threshold, conf};
}

namespace {

// PMI of a pair table entry: log[c(a,b)*T / (r(a)*c(b))].
struct PairStats {
  std::map<int, double> row;
  std::map<int, double> col;
  double total = 0.0;

  explicit PairStats(const std::map<IdPair, double>& table) {
    for (const auto& [k, w] : table) {
      row[k.a] += w;
      col[k.b] += w;
      total += w;
    }
  }

  double pmi(IdPair k, double count) const {
    return std::log(count * total / (row.at(k.a) * col.at(k.b)));
  }
};

}  // namespace

ModalityModel filter_outliers(const ModalityModel& m, double min_count,
                              std::optional<double> min_pmi) {
  std::map<IdTriple, double> joint = m.joint;
  std::map<IdPair, double> extra = m.passive_extra;

  std::erase_if(joint, [&](const auto& e) { return e.second < min_count; });

  bool changed = true;
  while (changed && min_pmi.has_value()) {
    changed = false;
    std::map<IdPair, double> active, passive;
    for (const auto& [k, w] : joint) {
      active[{k.s, k.v}] += w;
      passive[{k.v, k.o}] += w;
    }
    for (const auto& [k, w] : extra) passive[k] += w;

    PairStats active_stats(active), passive_stats(passive);
    std::set<IdPair> dead_active, dead_passive;
    for (const auto& [k, w] : active) {
      if (active_stats.pmi(k, w) < *min_pmi) dead_active.insert(k);
    }
    for (const auto& [k, w] : passive) {
      if (passive_stats.pmi(k, w) < *min_pmi) dead_passive.insert(k);
    }
    changed |= std::erase_if(joint, [&](const auto& e) {
                 const IdTriple& k = e.first;
                 return dead_active.contains({k.s, k.v}) ||
                        dead_passive.contains({k.v, k.o});
               }) > 0;
    changed |= std::erase_if(extra, [&](const auto& e) {
                 return dead_passive.contains(e.first);
               }) > 0;
  }

  // Rebuild vocabularies from the survivors, preserving the original
  // ordinal order, and remap every table.
  ModalityModel out;
  out.smoothing_k = m.smoothing_k;
  out.filter = {min_count, min_pmi};
  std::set<int> live_s, live_v, live_o;
  for (const auto& [k, w] : joint) {
    live_s.insert(k.s);
    live_v.insert(k.v);
    live_o.insert(k.o);
  }
  for (const auto& [k, w] : extra) {
    live_v.insert(k.a);
    live_o.insert(k.b);
  }
  std::map<int, int> smap, vmap, omap;
  for (int s : live_s) smap[s] = out.subjects.intern(m.subjects.at(s));
  for (int v : live_v) vmap[v] = out.verbs.intern(m.verbs.at(v));
  for (int o : live_o) omap[o] = out.objects.intern(m.objects.at(o));

  for (const auto& [k, w] : joint) {
    IdTriple nk{smap.at(k.s), vmap.at(k.v), omap.at(k.o)};
    out.joint[nk] = w;
    out.active[{nk.s, nk.v}] += w;
    out.passive[{nk.v, nk.o}] += w;
    out.total_joint += w;
    out.total_active += w;
    out.total_passive += w;
  }
  for (const auto& [k, w] : extra) {
    IdPair nk{vmap.at(k.a), omap.at(k.b)};
    out.passive_extra[nk] = w;
    out.passive[nk] += w;
    out.total_passive += w;
  }
  out.finalize();
  return out;
}

std::vector<std::string> consistency_errors(const ModalityModel& m) {
  std::vector<std::string> out;
  auto near = [](double a, double b) {
    double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
    return std::fabs(a - b) <= 1e-9 * scale;
  };
  double sum_joint = 0.0;
  for (const auto& [k, w] : m.joint) {
    if (w < 0.0) out.push_back("negative joint count");
    sum_joint += w;
  }
  if (!near(sum_joint, m.total_joint)) out.push_back("total_joint drift");

  std::map<IdPair, double> active, passive;
  for (const auto& [k, w] : m.joint) {
    active[{k.s, k.v}] += w;
    passive[{k.v, k.o}] += w;
  }
  for (const auto& [k, w] : m.passive_extra) {
    if (w < 0.0) out.push_back("negative passive_extra count");
    passive[k] += w;
  }
  if (active != m.active) {
    // exact marginal consistency is required for real subjects
    if (active.size() != m.active.size()) {
      out.push_back("active table key mismatch");
    } else {
      for (const auto& [k, w] : m.active) {
        auto it = active.find(k);
        if (it == active.end() || !near(it->second, w)) {
          out.push_back("active(" + std::to_string(k.a) + "," +
                        std::to_string(k.b) + ") != sum over objects");
          break;
        }
      }
    }
  }
  for (const auto& [k, w] : m.passive) {
    auto it = passive.find(k);
    if (it == passive.end() || !near(it->second, w)) {
      out.push_back("passive(" + std::to_string(k.a) + "," +
                    std::to_string(k.b) + ") != joint marginal + extra");
      break;
    }
  }
  return out;
}

namespace {

using nlohmann::json;

json pair_table_to_json(const std::map<IdPair, double>& table) {
  json arr = json::array();
  for (const auto& [k, w] : table) arr.push_back(json::array({k.a, k.b, w}));
  return arr;
}

std::map<IdPair, double> pair_table_from_json(const json& arr) {
  std::map<IdPair, double> out;
  for (const auto& e : arr) {
    out[{e.at(0).get<int>(), e.at(1).get<int>()}] = e.at(2).get<double>();
  }
  return out;
}

json vocab_to_json(const Vocab& v) { return json(v.entries()); }

void vocab_from_json(const json& arr, Vocab& v) {
  for (const auto& e : arr) v.intern(e.get<std::string>());
}

}  // namespace

std::string model_to_json(const ModalityModel& m) {
  json j;
  j["format"] = "affkb-model";
  j["version"] = 1;
  j["smoothing_k"] = m.smoothing_k;
  j["filter"]["min_count"] = m.filter.min_count;
  j["filter"]["min_pmi"] = m.filter.min_pmi.has_value() ? json(*m.filter.min_pmi) : json();
  j["subjects"] = vocab_to_json(m.subjects);
  j["verbs"] = vocab_to_json(m.verbs);
  j["objects"] = vocab_to_json(m.objects);
  json joint = json::array();
  for (const auto& [k, w] : m.joint) joint.push_back(json::array({k.s, k.v, k.o, w}));
  j["joint"] = std::move(joint);
  j["active"] = pair_table_to_json(m.active);
  j["passive"] = pair_table_to_json(m.passive);
  j["passive_extra"] = pair_table_to_json(m.passive_extra);
  j["totals"] = json::array({m.total_joint, m.total_active, m.total_passive});
  return j.dump(2);
}

ModalityModel model_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("format", "") != "affkb-model") {
    throw InputError("not a model document");
  }
  if (j.at("version").get<int>() != 1) {
    throw InputError("unsupported model version " + j.at("version").dump());
  }
  ModalityModel m;
  m.smoothing_k = j.at("smoothing_k").get<double>();
  m.filter.min_count = j.at("filter").at("min_count").get<double>();
  const json& pmi = j.at("filter").at("min_pmi");
  m.filter.min_pmi = pmi.is_null() ? std::nullopt : std::optional<double>(pmi.get<double>());
  vocab_from_json(j.at("subjects"), m.subjects);
  vocab_from_json(j.at("verbs"), m.verbs);
  vocab_from_json(j.at("objects"), m.objects);
  for (const auto& e : j.at("joint")) {
    m.joint[{e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()}] =
        e.at(3).get<double>();
  }
  m.active = pair_table_from_json(j.at("active"));
  m.passive = pair_table_from_json(j.at("passive"));
  m.passive_extra = pair_table_from_json(j.at("passive_extra"));
  m.total_joint = j.at("totals").at(0).get<double>();
  m.total_active = j.at("totals").at(1).get<double>();
  m.total_passive = j.at("totals").at(2).get<double>();
  m.finalize();
  return m;
}

}  // namespace affkb::modality
