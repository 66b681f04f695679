#include "kripke/reference.hpp"

#include "kripke/error.hpp"

namespace kripke::reference {

namespace {

std::vector<int> above(const Frame& fr, int v) {
  std::vector<int> out;
  for (int w = 0; w < static_cast<int>(fr.size()); ++w)
    if (fr.leq(v, w)) out.push_back(w);
  return out;
}

bool prop(const PropModel& m, int v, const Formula& f) {
  switch (f.op()) {
    case Op::Bot: return false;
    case Op::Prop: return m.valuation.at(f.name()) >> v & 1;
    case Op::And: return prop(m, v, f.lhs()) && prop(m, v, f.rhs());
    case Op::Or: return prop(m, v, f.lhs()) || prop(m, v, f.rhs());
    case Op::Impl:
      for (int w : above(m.frame, v))
        if (prop(m, w, f.lhs()) && !prop(m, w, f.rhs())) return false;
      return true;
    default: throw LanguageError("not a propositional formula");
  }
}

int fo_term(const FOModel& m, const Term& t, const ElemAssignment& a) {
  if (t.kind == Term::Kind::Const) return m.constants.at(t.name);
  auto it = a.find(t.name);
  if (it == a.end()) throw EvalError("unassigned variable '" + t.name + "'");
  return it->second;
}

bool fo(const FOModel& m, int v, const Formula& f, ElemAssignment& a) {
  switch (f.op()) {
    case Op::Bot: return false;
    case Op::Prop: {
      auto it = m.relations.find(f.name());
      return it != m.relations.end() && it->second.at[v].count(Tuple{}) > 0;
    }
    case Op::Pred: {
      Tuple t;
      for (auto& x : f.terms()) t.push_back(fo_term(m, x, a));
      auto it = m.relations.find(f.name());
      return it != m.relations.end() && it->second.at[v].count(t) > 0;
    }
    case Op::Eq: {
      if (!m.congruence) throw EvalError("equality used in an equality-free model");
      return (*m.congruence)[v].count({fo_term(m, f.terms()[0], a), fo_term(m, f.terms()[1], a)}) > 0;
    }
    case Op::And: return fo(m, v, f.lhs(), a) && fo(m, v, f.rhs(), a);
    case Op::Or: return fo(m, v, f.lhs(), a) || fo(m, v, f.rhs(), a);
    case Op::Impl:
      for (int w : above(m.frame, v))
        if (fo(m, w, f.lhs(), a) && !fo(m, w, f.rhs(), a)) return false;
      return true;
    case Op::Exists:
    case Op::Forall: {
      const std::string& x = f.name();
      std::optional<int> saved;
      if (auto it = a.find(x); it != a.end()) saved = it->second;
      bool r;
      if (f.op() == Op::Exists) {
        r = false;
        for (int e : m.domains[v]) {
          a[x] = e;
          if (fo(m, v, f.body(), a)) {
            r = true;
            break;
          }
        }
      } else {
        r = true;
        for (int w : above(m.frame, v)) {
          for (int e : m.domains[w]) {
            a[x] = e;
            if (!fo(m, w, f.body(), a)) {
              r = false;
              break;
            }
          }
          if (!r) break;
        }
      }
      if (saved) a[x] = *saved;
      else a.erase(x);
      return r;
    }
    default: throw LanguageError("not a first-order formula");
  }
}

std::optional<HFSet> set_term(const Term& t, const SetAssignment& a) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = a.find(t.name);
      if (it == a.end()) throw EvalError("unassigned variable '" + t.name + "'");
      return it->second;
    }
    case Term::Kind::Lit: return t.value;
    case Term::Kind::Fn: {
      std::vector<HFSet> args;
      for (auto& x : t.args) {
        auto v = set_term(x, a);
        if (!v) return std::nullopt;
        args.push_back(*v);
      }
      return apply_builtin(t.name, args);
    }
    default: throw EvalError("constants have no set value");
  }
}

bool set(const SetKripkeModel& m, int v, const Formula& f, SetAssignment& a) {
  switch (f.op()) {
    case Op::Bot: return false;
    case Op::Eq: {
      auto x = set_term(f.terms()[0], a), y = set_term(f.terms()[1], a);
      return x && y && *x == *y;
    }
    case Op::Mem: {
      auto x = set_term(f.terms()[0], a), y = set_term(f.terms()[1], a);
      return x && y && m.D(v).contains(*x) && m.D(v).contains(*y) && y->contains(*x);
    }
    case Op::And: return set(m, v, f.lhs(), a) && set(m, v, f.rhs(), a);
    case Op::Or: return set(m, v, f.lhs(), a) || set(m, v, f.rhs(), a);
    case Op::Impl:
      for (int w : above(m.frame, v))
        if (set(m, w, f.lhs(), a) && !set(m, w, f.rhs(), a)) return false;
      return true;
    case Op::BExists:
    case Op::BForall:
      // the abbreviations, literally
      return set(m, v, desugar(f), a);
    case Op::Exists: {
      const std::string& x = f.name();
      std::optional<HFSet> saved;
      if (auto it = a.find(x); it != a.end()) saved = it->second;
      bool r = false;
      for (HFSet e : m.D(v).members()) {
        a[x] = e;
        if (set(m, v, f.body(), a)) {
          r = true;
          break;
        }
      }
      if (saved) a[x] = *saved;
      else a.erase(x);
      return r;
    }
    case Op::Forall: {
      const std::string& x = f.name();
      std::optional<HFSet> saved;
      if (auto it = a.find(x); it != a.end()) saved = it->second;
      bool r = true;
      for (int w : above(m.frame, v)) {
        for (HFSet e : m.D(w).members()) {
          a[x] = e;
          if (!set(m, w, f.body(), a)) {
            r = false;
            break;
          }
        }
        if (!r) break;
      }
      if (saved) a[x] = *saved;
      else a.erase(x);
      return r;
    }
    default: throw LanguageError("not a set-language formula");
  }
}

}  // namespace

bool force_prop(const PropModel& m, int node, const Formula& f) { return prop(m, node, f); }

bool force_fo(const FOModel& m, int node, const Formula& f, const ElemAssignment& a) {
  ElemAssignment env = a;
  return fo(m, node, f, env);
}

bool force_set(const SetKripkeModel& m, int node, const Formula& f, const SetAssignment& a) {
  SetAssignment env = a;
  return set(m, node, f, env);
}

}  // namespace kripke::reference
