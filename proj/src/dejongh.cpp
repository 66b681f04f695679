#include "kripke/dejongh.hpp"

#include <algorithm>

#include "kripke/coding.hpp"
#include "kripke/error.hpp"

namespace kripke {

Formula button_formula(const Term& k) {
  std::set<std::string> avoid;
  for (auto& v : term_vars(k)) avoid.insert(v);
  std::string y = fresh_name("y", avoid);
  return Formula::exists(y, Formula::eq(Term::var(y), Term::fn("set", {Term::fn("succ", {k})})));
}

Formula button_sentence(std::uint64_t i) { return button_formula(Term::lit(ordinal(i))); }

HFSet button_witness(std::uint64_t i) { return singleton(ordinal(i + 1)); }

std::optional<std::uint64_t> button_index(HFSet x) {
  if (x.size() != 1) return std::nullopt;
  auto n = HFSet::from_id(x.element_ids()[0]).as_natural();
  if (!n || *n == 0) return std::nullopt;
  return *n - 1;
}

bool is_monotone(const Frame& fr, const MonotoneCode& f) {
  if (f.size() != fr.size()) return false;
  for (auto [v, w] : fr.pairs())
    if (!std::includes(f[w].begin(), f[w].end(), f[v].begin(), f[v].end())) return false;
  return true;
}

Universe default_button_base() {
  HFSet two = ordinal(2);
  return Universe::closure(std::span<const HFSet>(&two, 1));
}

SetKripkeModel realize_code(const Frame& fr, const MonotoneCode& f, const Universe& base) {
  require_valid(fr);
  if (f.size() != fr.size()) throw ModelError("code does not cover every node");
  if (!is_monotone(fr, f)) throw ModelError("code is not monotone");
  if (!base.is_transitive()) throw ModelError("base universe is not transitive");
  std::set<std::uint64_t> used;
  for (auto& s : f) used.insert(s.begin(), s.end());
  for (HFSet x : base.members())
    if (auto i = button_index(x); i && used.count(*i))
      throw ModelError("base universe contains the witness of button " + std::to_string(*i));
  SoundAssignment asg;
  for (auto& s : f) {
    std::vector<HFSet> ws;
    for (auto i : s) ws.push_back(button_witness(i));
    asg.push_back(base.with(ws));
  }
  return build_classical_model(fr, std::move(asg));
}

std::set<std::uint64_t> forced_buttons(SetForcer& fz, int node, const std::set<std::uint64_t>& indices) {
  std::set<std::uint64_t> out;
  for (auto i : indices)
    if (fz.forces(node, button_sentence(i))) out.insert(i);
  return out;
}

// ---------------------------------------------------------- translations

Formula Translation::apply_homomorphic(const Formula& f) const {
  switch (f.op()) {
    case Op::Bot:
    case Op::Eq:
    case Op::Mem: return f;
    case Op::Prop: {
      if (auto it = letters.find(f.name()); it != letters.end()) return it->second;
      if (auto it = relations.find(f.name()); it != relations.end() && it->second.first.empty()) return it->second.second;
      throw LanguageError("translation has no image for letter '" + f.name() + "'");
    }
    case Op::Pred: {
      auto it = relations.find(f.name());
      if (it == relations.end()) throw LanguageError("translation has no image for symbol '" + f.name() + "'");
      auto& [formals, body] = it->second;
      if (formals.size() != f.terms().size()) throw LanguageError("arity mismatch for symbol '" + f.name() + "'");
      std::map<std::string, Term> s;
      for (std::size_t i = 0; i < formals.size(); ++i) s.emplace(formals[i], f.terms()[i]);
      return substitute(body, s);
    }
    case Op::And: return Formula::conj(apply_homomorphic(f.lhs()), apply_homomorphic(f.rhs()));
    case Op::Or: return Formula::disj(apply_homomorphic(f.lhs()), apply_homomorphic(f.rhs()));
    case Op::Impl: return Formula::impl(apply_homomorphic(f.lhs()), apply_homomorphic(f.rhs()));
    case Op::Exists: return Formula::exists(f.name(), apply_homomorphic(f.body()));
    case Op::Forall: return Formula::forall(f.name(), apply_homomorphic(f.body()));
    case Op::BExists: return Formula::bexists(f.name(), f.bound(), apply_homomorphic(f.body()));
    case Op::BForall: return Formula::bforall(f.name(), f.bound(), apply_homomorphic(f.body()));
  }
  return f;
}

Formula Translation::apply(const Formula& f) const {
  if (kind == Kind::Relative) return apply_homomorphic(relativize_E(f, E));
  return apply_homomorphic(f);
}

// ---------------------------------------------------------- propositional

EquivalenceReport dejongh_prop_check(const PropModel& pm, const Formula& phi) {
  check_language(phi, Language::Prop);
  require_valid(pm.frame);
  if (!is_persistent(pm.frame, pm.valuation)) throw ModelError("valuation is not upward closed");
  EquivalenceReport rep;
  auto ls = letters(phi);
  std::map<std::string, std::string> ren;
  PropModel src{pm.frame, {}};
  Translation tr;
  tr.kind = Translation::Kind::Prop;
  const int n = static_cast<int>(pm.frame.size());
  MonotoneCode code(n);
  for (std::size_t k = 0; k < ls.size(); ++k) {
    std::string p = "p" + std::to_string(k);
    ren[ls[k]] = p;
    rep.renaming[ls[k]] = p;
    src.valuation.sets[p] = pm.valuation.at(ls[k]);
    tr.letters[p] = button_sentence(k);
    for (int v = 0; v < n; ++v)
      if (pm.valuation.at(ls[k]) >> v & 1) code[v].insert(k);
  }
  Formula rphi = rename_letters(phi, ren);
  SetKripkeModel target = realize_code(pm.frame, code);
  SetForcer fz(target);
  for (const Formula& chi : subformulas(rphi)) {
    NodeSet s = forcing_set(src, chi);
    Formula t = tr.apply(chi);
    for (int v = 0; v < n; ++v) {
      EquivRow row{render(chi), v, {}, static_cast<bool>(s >> v & 1), fz.forces(v, t)};
      ++rep.checked;
      if (row.source != row.target) rep.mismatches.push_back(row);
      rep.rows.push_back(std::move(row));
    }
  }
  Formula tphi = tr.apply(rphi);
  rep.translated = render(tphi);
  NodeSet s = forcing_set(src, rphi);
  for (int v = 0; v < n; ++v)
    if (!(s >> v & 1)) {
      rep.failing_nodes.push_back(v);
      if (fz.forces(v, tphi)) rep.target_fails_there = false;
    }
  return rep;
}

// --------------------------------------------------------- first-order

std::uint64_t domain_code(std::uint64_t j) {
  auto c = to_u64(code_seq({0, j}));
  if (!c) throw BudgetError("sequence code overflows 64 bits");
  return *c;
}

std::uint64_t predication_code(std::uint64_t i, const std::vector<std::uint64_t>& args) {
  std::vector<std::uint64_t> s{1, i};
  s.insert(s.end(), args.begin(), args.end());
  auto c = to_u64(code_seq_u64(s));
  if (!c) throw BudgetError("sequence code overflows 64 bits");
  return *c;
}

MonotoneCode fo_code(const FOModel& m) {
  if (m.has_equality()) throw ModelError("coding applies to equality-free models");
  require_valid(m);
  MonotoneCode f(m.frame.size());
  for (std::size_t v = 0; v < m.frame.size(); ++v) {
    for (int j : m.domains[v]) f[v].insert(domain_code(static_cast<std::uint64_t>(j)));
    std::uint64_t i = 0;
    for (auto& [name, r] : m.relations) {
      for (auto& t : r.at[v]) f[v].insert(predication_code(i, std::vector<std::uint64_t>(t.begin(), t.end())));
      ++i;
    }
  }
  return f;
}

namespace {

std::string relativizer_name(const FOModel& m, const Formula& phi) {
  std::set<std::string> used;
  for (auto& [n, r] : m.relations) used.insert(n);
  for (auto& [n, a] : predicate_arities(phi)) used.insert(n);
  for (auto& l : letters(phi)) used.insert(l);
  return fresh_name("E", used);
}

EquivalenceReport relative_check(const FOModel& m, const Formula& phi, const std::string& E) {
  if (!fits_language(phi, Language::FO)) throw LanguageError("relative check expects an equality-free first-order formula");
  if (!free_vars(phi).empty()) throw LanguageError("relative check expects a sentence");
  EquivalenceReport rep;
  MonotoneCode code = fo_code(m);
  int maxid = 2;
  for (auto& d : m.domains)
    for (int e : d) maxid = std::max(maxid, e);
  HFSet top = ordinal(static_cast<std::size_t>(maxid));
  SetKripkeModel target = realize_code(m.frame, code, Universe::closure(std::span<const HFSet>(&top, 1)));
  Translation tr = relative_translation(m, E);

  FOModel mE = m;
  auto& er = mE.relation(E, 1);
  for (std::size_t v = 0; v < m.frame.size(); ++v)
    for (int j : m.domains[v]) er.at[v].insert({j});

  FOForcer src(mE, Exec::Serial);
  SetForcer fz(target);
  Formula rho = relativize_E(phi, E);
  const int n = static_cast<int>(m.frame.size());
  for (const Formula& chi : subformulas(rho)) {
    Formula t = tr.apply_homomorphic(chi);
    auto fv = free_vars(chi);
    for (int v = 0; v < n; ++v) {
      const auto& d = m.domains[v];
      if (!fv.empty() && d.empty()) continue;
      std::vector<std::size_t> pos(fv.size(), 0);
      while (true) {
        ElemAssignment a;
        SetAssignment sa;
        std::map<std::string, std::string> shown;
        for (std::size_t k = 0; k < fv.size(); ++k) {
          a[fv[k]] = d[pos[k]];
          sa[fv[k]] = ordinal(static_cast<std::size_t>(d[pos[k]]));
          shown[fv[k]] = std::to_string(d[pos[k]]);
        }
        EquivRow row{render(chi), v, shown, src.forces(v, chi, a), fz.forces(v, t, sa)};
        ++rep.checked;
        if (row.source != row.target) rep.mismatches.push_back(row);
        rep.rows.push_back(std::move(row));
        std::size_t k = 0;
        while (k < fv.size() && ++pos[k] == d.size()) pos[k++] = 0;
        if (k == fv.size()) break;
      }
    }
  }
  Formula tphi = tr.apply(phi);
  rep.translated = render(tphi);
  FOForcer plain(m, Exec::Serial);
  for (int v = 0; v < n; ++v)
    if (!plain.forces(v, phi)) {
      rep.failing_nodes.push_back(v);
      if (fz.forces(v, tphi)) rep.target_fails_there = false;
    }
  return rep;
}

}  // namespace

Translation relative_translation(const FOModel& m, const std::string& E) {
  Translation tr;
  tr.kind = Translation::Kind::Relative;
  tr.E = E;
  auto seq = [](std::vector<Term> args) { return Term::fn("seq", std::move(args)); };
  tr.relations[E] = {{"x"}, button_formula(seq({Term::lit(ordinal(0)), Term::var("x")}))};
  std::size_t i = 0;
  for (auto& [name, r] : m.relations) {
    std::vector<std::string> formals;
    std::vector<Term> args{Term::lit(ordinal(1)), Term::lit(ordinal(i))};
    for (int k = 0; k < r.arity; ++k) {
      formals.push_back("x" + std::to_string(k));
      args.push_back(Term::var(formals.back()));
    }
    tr.relations[name] = {formals, button_formula(seq(args))};
    ++i;
  }
  return tr;
}

EquivalenceReport dejongh_relative_check(const FOModel& m, const Formula& phi) {
  return relative_check(m, phi, relativizer_name(m, phi));
}

}  // namespace kripke
