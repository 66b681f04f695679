#include "kripke/fo.hpp"

#include <algorithm>

#include "kripke/error.hpp"

namespace kripke {

std::size_t FOModel::num_elems() const {
  int mx = -1;
  for (auto& d : domains)
    for (int e : d) mx = std::max(mx, e);
  for (auto& [c, e] : constants) mx = std::max(mx, e);
  return static_cast<std::size_t>(mx + 1);
}

Relation& FOModel::relation(const std::string& name, int arity) {
  auto it = relations.find(name);
  if (it == relations.end()) {
    Relation r;
    r.arity = arity;
    r.at.assign(frame.size(), {});
    it = relations.emplace(name, std::move(r)).first;
  } else if (it->second.arity != arity) {
    throw ModelError("relation '" + name + "' used with arity " + std::to_string(arity));
  }
  return it->second;
}

bool FOModel::in_domain(int node, int e) const {
  auto& d = domains.at(node);
  return std::binary_search(d.begin(), d.end(), e);
}

namespace {

std::string tuple_str(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

}  // namespace

std::vector<FOViolation> check_fo_model(const FOModel& m) {
  using K = FOViolation::Kind;
  std::vector<FOViolation> out;
  for (auto& v : validate_frame(m.frame)) out.push_back({K::Frame, v.describe()});
  if (!out.empty()) return out;
  const int n = static_cast<int>(m.frame.size());
  if (static_cast<int>(m.domains.size()) != n) {
    out.push_back({K::Shape, "domain list does not match the frame"});
    return out;
  }
  auto nm = [&](int v) { return m.frame.name(v); };
  for (int v = 0; v < n; ++v)
    for (int e : m.domains[v])
      if (e < 0) out.push_back({K::Shape, "negative element id at " + nm(v)});
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (v != w && m.frame.leq(v, w))
        for (int e : m.domains[v])
          if (!m.in_domain(w, e))
            out.push_back({K::DomainMonotone, "element " + std::to_string(e) + " of D_" + nm(v) + " missing from D_" + nm(w)});
  for (auto& [name, r] : m.relations) {
    if (static_cast<int>(r.at.size()) != n) {
      out.push_back({K::Shape, "relation " + name + " does not cover every node"});
      continue;
    }
    for (int v = 0; v < n; ++v)
      for (auto& t : r.at[v]) {
        if (static_cast<int>(t.size()) != r.arity) {
          out.push_back({K::Arity, name + tuple_str(t) + " at " + nm(v) + " has the wrong arity"});
          continue;
        }
        for (int e : t)
          if (!m.in_domain(v, e))
            out.push_back({K::TupleOutsideDomain, name + tuple_str(t) + " at " + nm(v) + " leaves D_" + nm(v)});
        for (int w = 0; w < n; ++w)
          if (v != w && m.frame.leq(v, w) && !r.holds(w, t))
            out.push_back({K::RelationMonotone, name + tuple_str(t) + " holds at " + nm(v) + " but not at " + nm(w)});
      }
  }
  if (m.congruence) {
    auto& c = *m.congruence;
    if (static_cast<int>(c.size()) != n) {
      out.push_back({K::Shape, "congruence list does not match the frame"});
      return out;
    }
    for (int v = 0; v < n; ++v) {
      auto pr = [&](int a, int b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; };
      for (int e : m.domains[v])
        if (!c[v].count({e, e})) out.push_back({K::CongruenceNotEquivalence, "not reflexive at " + nm(v) + " on " + std::to_string(e)});
      for (auto [a, b] : c[v]) {
        if (!m.in_domain(v, a) || !m.in_domain(v, b))
          out.push_back({K::TupleOutsideDomain, "congruence pair " + pr(a, b) + " at " + nm(v) + " leaves D_" + nm(v)});
        if (!c[v].count({b, a})) out.push_back({K::CongruenceNotEquivalence, "not symmetric at " + nm(v) + " on " + pr(a, b)});
        for (auto [b2, d] : c[v])
          if (b2 == b && !c[v].count({a, d}))
            out.push_back({K::CongruenceNotEquivalence, "not transitive at " + nm(v) + " on " + pr(a, b) + "," + pr(b, d)});
        for (int w = 0; w < n; ++w)
          if (v != w && m.frame.leq(v, w) && !c[w].count({a, b}))
            out.push_back({K::CongruenceMonotone, pr(a, b) + " related at " + nm(v) + " but not at " + nm(w)});
      }
      for (auto& [name, r] : m.relations) {
        if (static_cast<int>(r.at.size()) != n) continue;
        for (auto& t : r.at[v])
          for (std::size_t i = 0; i < t.size(); ++i)
            for (auto [a, b] : c[v])
              if (a == t[i]) {
                Tuple u = t;
                u[i] = b;
                if (!r.holds(v, u))
                  out.push_back({K::CongruenceIncompatible, name + tuple_str(t) + " holds at " + nm(v) + " but " + name + tuple_str(u) + " does not"});
              }
      }
    }
  }
  for (auto& [c, e] : m.constants)
    for (int v = 0; v < n; ++v)
      if (!m.in_domain(v, e)) out.push_back({K::Constant, "constant " + c + " is outside D_" + nm(v)});
  return out;
}

void require_valid(const FOModel& m) {
  auto vs = check_fo_model(m);
  if (!vs.empty()) throw ModelError("invalid FO model: " + vs.front().detail);
}

namespace {

KripkeShape shape_of(const FOModel& m) { return KripkeShape::make(m.frame, m.num_elems(), m.domains); }

int term_elem(const FOModel& m, const Term& t, const std::vector<std::string>& vars, const std::vector<int>& elems) {
  if (t.kind == Term::Kind::Const) return m.constants.at(t.name);
  auto it = std::lower_bound(vars.begin(), vars.end(), t.name);
  return elems[it - vars.begin()];
}

AtomFactory fo_atoms(std::shared_ptr<const FOModel> m) {
  return [m]() -> AtomFn {
    return [m](int node, const Formula& atom, const std::vector<std::string>& vars, const std::vector<int>& elems) {
      switch (atom.op()) {
        case Op::Prop: {
          auto it = m->relations.find(atom.name());
          return it != m->relations.end() && it->second.arity == 0 && it->second.holds(node, {});
        }
        case Op::Pred: {
          auto it = m->relations.find(atom.name());
          if (it == m->relations.end()) return false;
          Tuple t;
          for (auto& term : atom.terms()) t.push_back(term_elem(*m, term, vars, elems));
          return it->second.holds(node, t);
        }
        case Op::Eq: {
          int a = term_elem(*m, atom.terms()[0], vars, elems);
          int b = term_elem(*m, atom.terms()[1], vars, elems);
          return (*m->congruence)[node].count({a, b}) > 0;
        }
        default: throw LanguageError("unexpected atom in a first-order model");
      }
    };
  };
}

}  // namespace

FOForcer::FOForcer(const FOModel& m, Exec exec)
    : m_(std::make_shared<const FOModel>(m)), eval_(shape_of(m), fo_atoms(m_), exec) {}

void FOForcer::check(const Formula& f) const {
  if (!fits_language(f, Language::FO) && !fits_language(f, Language::FOEq))
    throw LanguageError("formula is not first-order: " + render(f));
  for (auto& g : subformulas(f)) {
    if (g.op() == Op::Eq && !m_->has_equality()) throw EvalError("equality used in an equality-free model");
    if (g.op() == Op::Pred || g.op() == Op::Eq)
      for (auto& t : g.terms())
        if (t.kind == Term::Kind::Const && !m_->constants.count(t.name))
          throw EvalError("uninterpreted constant '" + t.name + "'");
    if (g.op() == Op::Pred) {
      auto it = m_->relations.find(g.name());
      if (it != m_->relations.end() && it->second.arity != static_cast<int>(g.terms().size()))
        throw EvalError("relation " + g.name() + " has arity " + std::to_string(it->second.arity));
    }
  }
}

bool FOForcer::forces(int node, const Formula& f, const ElemAssignment& a) {
  if (node < 0 || node >= static_cast<int>(m_->frame.size())) throw ModelError("unknown node index");
  check(f);
  for (auto& x : free_vars(f)) {
    auto it = a.find(x);
    if (it == a.end()) throw EvalError("unassigned variable '" + x + "'");
    if (!m_->in_domain(node, it->second))
      throw EvalError("variable '" + x + "' assigned outside D_" + m_->frame.name(node));
  }
  return eval_.at(f, node, a);
}

bool force_fo(const FOModel& m, int node, const Formula& f, const ElemAssignment& a) {
  FOForcer fz(m, Exec::Serial);
  return fz.forces(node, f, a);
}

bool force_fo(const FOModel& m, const std::string& node, const Formula& f, const ElemAssignment& a) {
  return force_fo(m, m.frame.index(node), f, a);
}

std::optional<FOPersistenceCounterexample> check_fo_persistence(const FOModel& m, const Formula& f) {
  FOForcer fz(m, Exec::Serial);
  const int n = static_cast<int>(m.frame.size());
  for (auto& g : subformulas(f)) {
    auto t = fz.table(g);
    const std::size_t k = t->vars.size();
    for (int v = 0; v < n; ++v) {
      std::vector<int> a(k, 0);
      std::vector<std::size_t> pos(k, 0);
      const auto& d = m.domains[v];
      if (k && d.empty()) continue;
      while (true) {
        for (std::size_t j = 0; j < k; ++j) a[j] = d[pos[j]];
        if (t->at(v, a))
          for (int w = 0; w < n; ++w)
            if (m.frame.leq(v, w) && !t->at(w, a)) {
              ElemAssignment as;
              for (std::size_t j = 0; j < k; ++j) as[t->vars[j]] = a[j];
              return FOPersistenceCounterexample{g, v, w, as};
            }
        std::size_t j = 0;
        while (j < k && ++pos[j] == d.size()) pos[j++] = 0;
        if (j == k) break;
      }
    }
  }
  return std::nullopt;
}

PadResult pad_domains(const FOModel& m, int k, const std::vector<int>& nodes) {
  if (m.has_equality()) throw ModelError("domain padding applies to equality-free models only");
  if (k < 0) throw Error("padding count must be non-negative");
  require_valid(m);
  const int n = static_cast<int>(m.frame.size());
  std::vector<int> targets = nodes;
  if (targets.empty())
    for (int v = 0; v < n; ++v) targets.push_back(v);

  PadResult r;
  r.model = m;
  for (auto& d : m.domains)
    for (int e : d) r.origin[e] = e;
  int next = static_cast<int>(m.num_elems());
  std::map<int, std::vector<int>> clones;  // original -> fresh copies
  for (int v : targets) {
    if (v < 0 || v >= n) throw ModelError("unknown node index");
    if (m.domains[v].empty()) throw ModelError("cannot pad node " + m.frame.name(v) + ": empty domain");
    int y = m.domains[v].front();
    for (int i = 0; i < k; ++i) {
      int e = next++;
      r.origin[e] = y;
      clones[y].push_back(e);
      for (int w = 0; w < n; ++w)
        if (m.frame.leq(v, w)) r.model.domains[w].push_back(e);
    }
  }
  for (auto& d : r.model.domains) std::sort(d.begin(), d.end());

  for (auto& [name, rel] : r.model.relations) {
    const Relation& orig = m.relations.at(name);
    for (int w = 0; w < n; ++w) {
      std::set<Tuple> out;
      for (const Tuple& t : orig.at[w]) {
        std::vector<std::vector<int>> choices;
        for (int e : t) {
          std::vector<int> c{e};
          if (auto it = clones.find(e); it != clones.end())
            for (int x : it->second)
              if (r.model.in_domain(w, x)) c.push_back(x);
          choices.push_back(std::move(c));
        }
        std::vector<std::size_t> pos(t.size(), 0);
        while (true) {
          Tuple u(t.size());
          for (std::size_t i = 0; i < t.size(); ++i) u[i] = choices[i][pos[i]];
          out.insert(u);
          std::size_t i = 0;
          while (i < t.size() && ++pos[i] == choices[i].size()) pos[i++] = 0;
          if (i == t.size()) break;
        }
      }
      rel.at[w] = std::move(out);
    }
  }
  for (int v = 0; v < n; ++v) {
    std::map<int, int> f;
    for (int e : m.domains[v]) f[e] = e;
    r.maps.push_back(std::move(f));
  }
  return r;
}

std::vector<std::string> iqc_countermodel_names() { return {"CD", "DNS", "DecidableP", "TwoElementEq"}; }

Formula iqc_schema(const std::string& name) {
  if (name == "CD") return parse("(forall x (P(x) | q)) -> (forall x P(x)) | q", Language::FO);
  if (name == "DNS") return parse("forall x (~~P(x) -> P(x))", Language::FO);
  if (name == "DecidableP") return parse("forall x (P(x) | ~P(x))", Language::FO);
  if (name == "TwoElementEq")
    return parse("(exists x exists y forall z (z = x | z = y)) -> exists x forall z (z = x)", Language::FOEq);
  throw Error("unknown schema '" + name + "'");
}

FOModel iqc_countermodel(const std::string& name) {
  FOModel m;
  if (name == "CD") {
    // the fresh top element 1 lacks P, but q arrives with it
    m.frame = Frame::chain(2);
    m.domains = {{0}, {0, 1}};
    auto& p = m.relation("P", 1);
    p.at[0] = {{0}};
    p.at[1] = {{0}};
    m.relation("q", 0).at[1] = {{}};
  } else if (name == "DNS" || name == "DecidableP") {
    m.frame = Frame::chain(2);
    m.domains = {{0}, {0}};
    m.relation("P", 1).at[1] = {{0}};
  } else if (name == "TwoElementEq") {
    m.frame = Frame::chain(1);
    m.domains = {{0, 1}};
    m.congruence = std::vector<std::set<std::pair<int, int>>>{{{0, 0}, {1, 1}}};
  } else {
    throw Error("unknown countermodel '" + name + "'");
  }
  return m;
}

nlohmann::json fo_model_to_json(const FOModel& m) {
  using nlohmann::json;
  json j;
  j["frame"] = frame_to_json(m.frame);
  json doms = json::object();
  for (std::size_t v = 0; v < m.frame.size(); ++v) doms[m.frame.name(static_cast<int>(v))] = m.domains[v];
  j["domains"] = doms;
  json rels = json::object(), ar = json::object();
  for (auto& [name, r] : m.relations) {
    ar[name] = r.arity;
    json per = json::object();
    for (std::size_t v = 0; v < m.frame.size(); ++v) {
      json ts = json::array();
      for (auto& t : r.at[v]) ts.push_back(t);
      per[m.frame.name(static_cast<int>(v))] = ts;
    }
    rels[name] = per;
  }
  j["arities"] = ar;
  j["relations"] = rels;
  if (m.congruence) {
    json c = json::object();
    for (std::size_t v = 0; v < m.frame.size(); ++v) {
      json ps = json::array();
      for (auto [a, b] : (*m.congruence)[v]) ps.push_back({a, b});
      c[m.frame.name(static_cast<int>(v))] = ps;
    }
    j["congruence"] = c;
  }
  if (!m.constants.empty()) j["constants"] = m.constants;
  return j;
}

FOModel fo_model_from_json(const nlohmann::json& j) {
  FOModel m;
  m.frame = frame_from_json(j.at("frame"));
  const std::size_t n = m.frame.size();
  m.domains.assign(n, {});
  if (j.contains("domains"))
    for (auto& [v, ids] : j.at("domains").items()) {
      auto& d = m.domains[m.frame.index(v)];
      d = ids.get<std::vector<int>>();
      std::sort(d.begin(), d.end());
      d.erase(std::unique(d.begin(), d.end()), d.end());
    }
  std::map<std::string, int> arities;
  if (j.contains("arities")) arities = j.at("arities").get<std::map<std::string, int>>();
  if (j.contains("relations"))
    for (auto& [name, per] : j.at("relations").items()) {
      int arity = -1;
      if (auto it = arities.find(name); it != arities.end()) arity = it->second;
      for (auto& [v, ts] : per.items())
        for (auto& t : ts)
          if (arity < 0) arity = static_cast<int>(t.size());
      if (arity < 0) throw ModelError("cannot infer the arity of relation '" + name + "'");
      auto& r = m.relation(name, arity);
      for (auto& [v, ts] : per.items())
        for (auto& t : ts) r.at[m.frame.index(v)].insert(t.get<Tuple>());
    }
  if (j.contains("valuation"))
    for (auto& [name, nodes] : j.at("valuation").items()) {
      auto& r = m.relation(name, 0);
      for (auto& v : nodes) r.at[m.frame.index(v.get<std::string>())].insert(Tuple{});
    }
  for (auto& [name, a] : arities) m.relation(name, a);
  if (j.contains("congruence")) {
    // listed pairs are identifications; the diagonal is implied
    std::vector<std::set<std::pair<int, int>>> c(n);
    for (std::size_t v = 0; v < n; ++v)
      for (int e : m.domains[v]) c[v].insert({e, e});
    for (auto& [v, ps] : j.at("congruence").items())
      for (auto& p : ps) c[m.frame.index(v)].insert({p.at(0).get<int>(), p.at(1).get<int>()});
    m.congruence = std::move(c);
  }
  if (j.contains("constants")) m.constants = j.at("constants").get<std::map<std::string, int>>();
  require_valid(m);
  return m;
}

}  // namespace kripke
