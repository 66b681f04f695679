#include "kripke/set_model.hpp"

#include <algorithm>

#include "kripke/axioms.hpp"
#include "kripke/error.hpp"

namespace kripke {

std::vector<std::string> sound_assignment_violations(const Frame& fr, const SoundAssignment& asg) {
  std::vector<std::string> out;
  for (auto& v : validate_frame(fr)) out.push_back(v.describe());
  if (!out.empty()) return out;
  if (asg.size() != fr.size()) {
    out.push_back("assignment covers " + std::to_string(asg.size()) + " nodes, frame has " + std::to_string(fr.size()));
    return out;
  }
  for (std::size_t v = 0; v < fr.size(); ++v) {
    auto miss = asg[v].missing_children();
    if (!miss.empty())
      out.push_back("universe at " + fr.name(static_cast<int>(v)) + " is not transitive: " + to_literal(miss[0].second) +
                    " in " + to_literal(miss[0].first) + " is missing");
  }
  for (auto [v, w] : fr.pairs())
    if (v != w && !asg[v].subset_of(asg[w]))
      out.push_back("assignment not monotone: universe at " + fr.name(v) + " is not contained in the one at " + fr.name(w));
  return out;
}

SetKripkeModel build_classical_model(const Frame& fr, SoundAssignment asg) {
  auto vs = sound_assignment_violations(fr, asg);
  if (!vs.empty()) throw ModelError(vs.front());
  return SetKripkeModel{fr, std::move(asg)};
}

// ------------------------------------------------------------- SetForcer

std::size_t SetForcer::KeyHash::operator()(const std::vector<std::uint32_t>& k) const {
  std::size_t h = 1469598103934665603ull;
  for (auto x : k) h = (h ^ x) * 1099511628211ull;
  return h;
}

SetForcer::SetForcer(std::shared_ptr<const SetKripkeModel> m) : m_(std::move(m)) {
  for (std::size_t v = 0; v < m_->frame.size(); ++v) up_.push_back(m_->frame.up_list(static_cast<int>(v)));
}

int SetForcer::var_id(const std::string& v) {
  auto [it, fresh] = vars_.emplace(v, static_cast<int>(vars_.size()));
  if (fresh) env_.resize(vars_.size());
  return it->second;
}

SetForcer::CTerm SetForcer::compile_term(const Term& t) {
  CTerm c;
  c.kind = t.kind;
  switch (t.kind) {
    case Term::Kind::Var: c.var = var_id(t.name); break;
    case Term::Kind::Lit: c.value = t.value; break;
    case Term::Kind::Fn:
      c.fn = t.name;
      for (auto& a : t.args) c.args.push_back(compile_term(a));
      break;
    case Term::Kind::Const: throw EvalError("constant '" + t.name + "' has no set value");
  }
  return c;
}

int SetForcer::compile(const Formula& f) {
  if (auto it = interned_.find(f); it != interned_.end()) return it->second;
  CNode c;
  c.op = f.op();
  for (auto& v : free_vars(f)) c.fv.push_back(var_id(v));
  switch (f.op()) {
    case Op::Eq:
    case Op::Mem:
      for (auto& t : f.terms()) c.terms.push_back(compile_term(t));
      break;
    case Op::And:
    case Op::Or:
    case Op::Impl:
      c.a = compile(f.lhs());
      c.b = compile(f.rhs());
      break;
    case Op::BExists:
    case Op::BForall: c.bound = compile_term(f.bound()); [[fallthrough]];
    case Op::Exists:
    case Op::Forall: {
      c.var = var_id(f.name());
      c.a = compile(f.body());
      const Formula& body = f.body();
      if (f.op() == Op::Exists && body.op() == Op::Eq) {
        for (int side = 0; side < 2; ++side) {
          const Term& x = body.terms()[side];
          const Term& t = body.terms()[1 - side];
          auto tv = term_vars(t);
          if (x.kind == Term::Kind::Var && x.name == f.name() && std::find(tv.begin(), tv.end(), f.name()) == tv.end()) {
            c.witness_term = compile_term(t);
            break;
          }
        }
      }
      break;
    }
    case Op::Bot: break;
    default: throw LanguageError("set forcing expects a set-language formula");
  }
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(c));
  interned_.emplace(f, id);
  return id;
}

std::optional<HFSet> SetForcer::value(const CTerm& t) const {
  switch (t.kind) {
    case Term::Kind::Var: return env_[t.var];
    case Term::Kind::Lit: return t.value;
    case Term::Kind::Fn: {
      std::vector<HFSet> vals;
      vals.reserve(t.args.size());
      for (auto& a : t.args) {
        auto v = value(a);
        if (!v) return std::nullopt;
        vals.push_back(*v);
      }
      return apply_builtin(t.fn, vals);
    }
    default: return std::nullopt;
  }
}

bool SetForcer::eval(int cn, int node) {
  const CNode& c = nodes_[cn];
  std::vector<std::uint32_t> key;
  key.reserve(c.fv.size() + 2);
  key.push_back(static_cast<std::uint32_t>(cn));
  key.push_back(static_cast<std::uint32_t>(node));
  for (int v : c.fv) key.push_back(env_[v].id());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  bool r = eval_raw(c, node);
  memo_.emplace(std::move(key), r);
  return r;
}

bool SetForcer::quant_body(const CNode& c, int node, HFSet x) {
  HFSet saved = env_[c.var];
  env_[c.var] = x;
  bool r = eval(c.a, node);
  env_[c.var] = saved;
  return r;
}

bool SetForcer::eval_raw(const CNode& c, int node) {
  const Universe& D = m_->D(node);
  switch (c.op) {
    case Op::Bot: return false;
    case Op::Eq: {
      auto x = value(c.terms[0]), y = value(c.terms[1]);
      return x && y && *x == *y;
    }
    case Op::Mem: {
      auto x = value(c.terms[0]), y = value(c.terms[1]);
      return x && y && D.contains(*x) && D.contains(*y) && y->contains(*x);
    }
    case Op::And: return eval(c.a, node) && eval(c.b, node);
    case Op::Or: return eval(c.a, node) || eval(c.b, node);
    case Op::Impl:
      for (int w : up_[node])
        if (eval(c.a, w) && !eval(c.b, w)) return false;
      return true;
    case Op::Exists: {
      if (c.witness_term) {
        auto t = value(*c.witness_term);
        return t && D.contains(*t);
      }
      for (HFSet x : D.members())
        if (quant_body(c, node, x)) return true;
      return false;
    }
    case Op::Forall: {
      // by persistence each element is checked at the nodes where it first
      // appears above `node`
      for (int w : up_[node]) {
        std::vector<const Universe*> below;
        for (int u : up_[node])
          if (u != w && m_->frame.leq(u, w)) below.push_back(&m_->D(u));
        for (HFSet x : m_->D(w).members()) {
          bool older = false;
          for (auto* U : below)
            if (U->contains(x)) {
              older = true;
              break;
            }
          if (!older && !quant_body(c, w, x)) return false;
        }
      }
      return true;
    }
    case Op::BExists: {
      auto t = value(c.bound);
      if (!t || !D.contains(*t)) return false;
      for (auto id : t->element_ids())
        if (quant_body(c, node, HFSet::from_id(id))) return true;
      return false;
    }
    case Op::BForall: {
      auto t = value(c.bound);
      if (!t) return true;
      for (int w : up_[node]) {
        if (!m_->D(w).contains(*t)) continue;
        for (auto id : t->element_ids())
          if (!quant_body(c, w, HFSet::from_id(id))) return false;
        if (w == node) break;  // elements of t checked here persist upward
      }
      return true;
    }
    default: throw LanguageError("set forcing expects a set-language formula");
  }
}

bool SetForcer::forces(int node, const Formula& f, const SetAssignment& params) {
  if (node < 0 || node >= static_cast<int>(m_->frame.size())) throw ModelError("unknown node index");
  check_language(f, Language::Set);
  int cn = compile(f);
  for (int v : nodes_[cn].fv) {
    const std::string* name = nullptr;
    for (auto& [n, id] : vars_)
      if (id == v) name = &n;
    auto it = params.find(*name);
    if (it == params.end()) throw EvalError("unassigned variable '" + *name + "'");
    if (!m_->D(node).contains(it->second))
      throw EvalError("parameter " + *name + " = " + to_literal(it->second) + " is outside D_" + m_->frame.name(node));
    env_[v] = it->second;
  }
  return eval(cn, node);
}

std::optional<HFSet> SetForcer::witness(int node, const std::string& var, const Formula& body, const SetAssignment& params) {
  std::vector<HFSet> cands = m_->D(node).members();
  sort_canonical(cands);
  SetAssignment a = params;
  for (HFSet x : cands) {
    a[var] = x;
    if (forces(node, body, a)) return x;
  }
  return std::nullopt;
}

bool force_set(const SetKripkeModel& m, int node, const Formula& f, const SetAssignment& params) {
  SetForcer fz(m);
  return fz.forces(node, f, params);
}

// ------------------------------------------------------------ locality

std::vector<LocalityRow> LocalityReport::mismatches() const {
  std::vector<LocalityRow> out;
  for (auto& r : rows)
    if (r.forced != r.classical) out.push_back(r);
  return out;
}

LocalityReport check_local_evaluation(const SetKripkeModel& m, const Formula& f, const SetAssignment& params) {
  if (classify(f).tag != FormulaClass::Tag::Delta0) throw LanguageError("locality check needs a Delta0 formula");
  SetForcer fz(m);
  LocalityReport rep;
  for (int v = 0; v < static_cast<int>(m.frame.size()); ++v) {
    bool inside = true;
    for (auto& [n, x] : params) inside = inside && m.D(v).contains(x);
    if (!inside) continue;
    rep.rows.push_back({v, fz.forces(v, f, params), eval_classical(m.D(v), f, params)});
  }
  return rep;
}

// -------------------------------------------------------------- audits

Formula universal_closure(const Formula& f) {
  Formula g = f;
  auto fv = free_vars(f);
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) g = Formula::forall(*it, g);
  return g;
}

bool AxiomReport::forced_everywhere() const {
  if (!checkable) return false;
  for (auto& n : nodes)
    if (!n.forced) return false;
  return true;
}

AxiomReport check_axiom(const SetKripkeModel& m, const std::string& name, const Formula& ax) {
  AxiomReport rep;
  rep.name = name;
  rep.formula = render(ax);
  if (axiom_needs_omega(name)) {
    rep.checkable = false;
    return rep;
  }
  SetForcer fz(m);
  for (int v = 0; v < static_cast<int>(m.frame.size()); ++v) {
    AxiomNodeResult r{v, fz.forces(v, ax), std::nullopt};
    if (r.forced && ax.op() == Op::Exists) r.witness = fz.witness(v, ax.name(), ax.body());
    rep.nodes.push_back(r);
  }
  return rep;
}

AxiomReport check_axiom(const SetKripkeModel& m, const std::string& name, const std::optional<Formula>& matrix) {
  Formula ax = universal_closure(axiom(name, matrix));
  std::string label = matrix ? name + "[" + render(*matrix) + "]" : name;
  auto rep = check_axiom(m, name, ax);
  rep.name = label;
  return rep;
}

std::vector<AxiomReport> audit(const SetKripkeModel& m, const std::string& group,
                               const std::map<std::string, std::vector<Formula>>& matrices) {
  std::vector<AxiomReport> out;
  for (auto& name : axiom_group(group)) {
    if (axiom_is_scheme(name)) {
      auto it = matrices.find(name);
      if (it == matrices.end()) continue;
      for (auto& mat : it->second) out.push_back(check_axiom(m, name, std::optional<Formula>(mat)));
    } else {
      out.push_back(check_axiom(m, name, std::optional<Formula>()));
    }
  }
  return out;
}

// ------------------------------------------------------------ Exp failure

bool is_function(HFSet g, HFSet a, HFSet b) {
  std::vector<HFSet> dom;
  for (auto id : g.element_ids()) {
    auto p = HFSet::from_id(id).as_pair();
    if (!p || !a.contains(p->first) || !b.contains(p->second)) return false;
    dom.push_back(p->first);
  }
  std::sort(dom.begin(), dom.end());
  if (std::adjacent_find(dom.begin(), dom.end()) != dom.end()) return false;
  return dom.size() == a.size();
}

namespace {

Formula exp_instance() {
  return Formula::exists("z", Formula::forall("f", Formula::iff(Formula::mem(Term::var("f"), Term::var("z")),
                                                                fun_formula(Term::var("f"), Term::var("a"), Term::var("b")))));
}

}  // namespace

std::optional<ExpWitness> exp_failure_witness_at(const SetKripkeModel& m, int v) {
  const Universe& Dv = m.D(v);
  std::vector<HFSet> dv = Dv.members();
  sort_canonical(dv);
  for (int w : m.frame.up_list(v)) {
    if (w == v) continue;
    std::vector<HFSet> fresh;
    for (HFSet g : m.D(w).members())
      if (!Dv.contains(g)) fresh.push_back(g);
    sort_canonical(fresh);
    for (HFSet g : fresh) {
      std::vector<HFSet> dom, rng;
      bool pairs = true;
      for (auto id : g.element_ids()) {
        auto p = HFSet::from_id(id).as_pair();
        if (!p) {
          pairs = false;
          break;
        }
        dom.push_back(p->first);
        rng.push_back(p->second);
      }
      if (!pairs) continue;
      HFSet a = HFSet::make(dom);
      if (!Dv.contains(a)) continue;
      for (HFSet b : dv) {
        if (!is_function(g, a, b)) continue;
        SetForcer fz(m);
        bool refuted = !fz.forces(v, exp_instance(), {{"a", a}, {"b", b}});
        return ExpWitness{v, w, a, b, g, refuted};
      }
    }
  }
  return std::nullopt;
}

std::optional<ExpWitness> exp_failure_witness(const SetKripkeModel& m) {
  for (int v = 0; v < static_cast<int>(m.frame.size()); ++v)
    if (auto w = exp_failure_witness_at(m, v)) return w;
  return std::nullopt;
}

// ------------------------------------------------------ equality collapse

Formula collapse_formula() {
  return parse("(exists x exists y forall z (z = x | z = y)) -> exists x forall z (z = x)", Language::Set);
}

bool CollapseReport::phi_everywhere() const {
  for (auto& r : rows)
    if (!r.phi) return false;
  return true;
}

CollapseReport check_equality_collapse(const SetKripkeModel& m) {
  Formula phi = collapse_formula();
  SetForcer fz(m);
  CollapseReport rep;
  for (int v = 0; v < static_cast<int>(m.frame.size()); ++v) {
    CollapseRow r{v, m.D(v).size(), fz.forces(v, phi.lhs()), fz.forces(v, Formula::neg(phi.lhs())),
                  fz.forces(v, phi.rhs()), fz.forces(v, phi)};
    if (r.domain_size < 3) rep.conclusive = false;
    rep.rows.push_back(r);
  }
  return rep;
}

// ------------------------------------------------------------------ JSON

nlohmann::json set_model_to_json(const SetKripkeModel& m) {
  nlohmann::json j;
  j["frame"] = frame_to_json(m.frame);
  nlohmann::json u = nlohmann::json::object();
  for (std::size_t v = 0; v < m.frame.size(); ++v) {
    std::vector<HFSet> xs = m.universes[v].members();
    sort_canonical(xs);
    nlohmann::json lits = nlohmann::json::array();
    for (HFSet x : xs) lits.push_back(to_literal(x));
    u[m.frame.name(static_cast<int>(v))] = lits;
  }
  j["universes"] = u;
  return j;
}

SetKripkeModel set_model_from_json(const nlohmann::json& j, std::size_t size_budget) {
  Frame fr = frame_from_json(j.at("frame"));
  bool close = j.value("close", false);
  SoundAssignment asg(fr.size());
  for (auto& [v, lits] : j.at("universes").items()) {
    if (lits.is_string()) {
      // "V_n": the full level
      std::string s = lits.get<std::string>();
      if (s.size() < 3 || s.compare(0, 2, "V_") != 0) throw ModelError("bad universe '" + s + "'");
      asg[fr.index(v)] = full_universe(static_cast<unsigned>(std::stoul(s.substr(2))), size_budget);
      continue;
    }
    std::vector<HFSet> xs;
    for (auto& l : lits) xs.push_back(parse_hf_literal(l.get<std::string>()));
    if (xs.size() > size_budget) throw BudgetError("universe at " + v + " exceeds the size budget");
    asg[fr.index(v)] = close ? Universe::closure(xs) : Universe(xs);
    if (asg[fr.index(v)].size() > size_budget) throw BudgetError("universe at " + v + " exceeds the size budget");
  }
  return build_classical_model(fr, std::move(asg));
}

}  // namespace kripke
