#include "kripke/axioms.hpp"

#include <algorithm>

#include "kripke/error.hpp"

namespace kripke {

namespace {

using F = Formula;

Term V(const std::string& n) { return Term::var(n); }
F mem(const std::string& a, const std::string& b) { return F::mem(V(a), V(b)); }

std::set<std::string> term_var_set(std::initializer_list<Term> ts) {
  std::set<std::string> s;
  for (auto& t : ts)
    for (auto& v : term_vars(t)) s.insert(v);
  return s;
}

struct Namer {
  std::set<std::string> avoid;
  std::string operator()(const std::string& base) {
    std::string n = fresh_name(base, avoid);
    avoid.insert(n);
    return n;
  }
};

// Fresh names avoid the matrix and the scheme's distinguished variables.
Namer namer_for(const Formula& phi, std::initializer_list<const char*> distinguished) {
  Namer nm;
  nm.avoid = all_var_names(phi);
  for (auto d : distinguished) nm.avoid.insert(d);
  return nm;
}

F sub(const Formula& phi, std::map<std::string, Term> s) { return substitute(phi, s); }

void require_delta0(const Formula& phi, const std::string& scheme) {
  if (classify(phi).tag != FormulaClass::Tag::Delta0)
    throw LanguageError(scheme + " needs a Delta0 matrix, got " + render(phi));
}

}  // namespace

Formula fun_formula(const Term& f, const Term& x, const Term& y) {
  Namer nm;
  nm.avoid = term_var_set({f, x, y});
  std::string p = nm("p"), a = nm("u"), b = nm("v"), c = nm("w");
  auto pr = [](const std::string& s, const std::string& t) { return Term::fn("pair", {V(s), V(t)}); };
  // every element of f is a pair in x * y
  F graph = F::bforall(p, f, F::bexists(a, x, F::bexists(b, y, F::eq(V(p), pr(a, b)))));
  // total
  F total = F::bforall(a, x, F::bexists(b, y, F::mem(pr(a, b), f)));
  // single-valued
  F single = F::bforall(a, x, F::bforall(b, y, F::bforall(c, y,
      F::impl(F::conj(F::mem(pr(a, b), f), F::mem(pr(a, c), f)), F::eq(V(b), V(c))))));
  return F::conj(F::conj(graph, total), single);
}

Formula ind_formula(const Term& a) {
  Namer nm;
  nm.avoid = term_var_set({a});
  std::string x = nm("x"), y = nm("y");
  return F::conj(F::mem(Term::lit(HFSet()), a),
                 F::bforall(x, a, F::bexists(y, a, F::eq(V(y), Term::fn("set", {V(x)})))));
}

Formula axiom_empty_set() { return parse("exists a forall x in a false", Language::Set); }

Formula axiom_pairing() {
  return parse("forall a forall b exists y forall x (x in y <-> x = a | x = b)", Language::Set);
}

Formula axiom_union() {
  return parse("forall a exists y forall x (x in y <-> exists u (u in a & x in u))", Language::Set);
}

Formula axiom_extensionality() {
  return parse("forall a forall b (forall x (x in a <-> x in b) -> a = b)", Language::Set);
}

Formula axiom_infinity() {
  return parse(
      "exists x ({} in x & (forall y (y in x -> succ(y) in x)) & "
      "(forall y (y in x -> y = {} | exists z in y (y = succ(z)))))",
      Language::Set);
}

Formula axiom_strong_infinity() {
  return F::exists("a", F::conj(ind_formula(V("a")),
                                F::forall("b", F::impl(ind_formula(V("b")), F::bforall("x", V("a"), mem("x", "b"))))));
}

Formula axiom_power_set() {
  return parse("forall a exists y forall z (z in y <-> forall w in z (w in a))", Language::Set);
}

Formula axiom_exp() {
  return F::forall("x", F::forall("y", F::exists("z", F::forall("f",
      F::iff(mem("f", "z"), fun_formula(V("f"), V("x"), V("y")))))));
}

Formula axiom_mp() {
  Term two = Term::lit(ordinal(2));
  auto val = [](int k) { return Term::fn("pair", {V("n"), Term::lit(ordinal(k))}); };
  F all_zero = F::bforall("n", V("omega"), F::mem(val(0), V("alpha")));
  F some_one = F::bexists("n", V("omega"), F::mem(val(1), V("alpha")));
  return F::forall("alpha", F::impl(fun_formula(V("alpha"), V("omega"), two), F::impl(F::neg(all_zero), some_one)));
}

Formula axiom_ac() {
  return parse(
      "forall a ((forall x in a exists z in x (z = z)) & "
      "(forall x in a forall y in a (x != y -> forall z in x ~(z in y))) -> "
      "exists b forall x in a exists z in b (z in x & forall t in b (t in x -> t = z)))",
      Language::Set);
}

Formula set_induction_instance(const Formula& phi) {
  Namer nm = namer_for(phi, {"x"});
  std::string a = nm("a");
  F at_a = sub(phi, {{"x", V(a)}});
  return F::impl(F::forall(a, F::impl(F::bforall("x", V(a), phi), at_a)), F::forall(a, at_a));
}

namespace {

Formula separation(const Formula& phi) {
  Namer nm = namer_for(phi, {"x"});
  std::string a = nm("a"), y = nm("y");
  return F::forall(a, F::exists(y, F::forall("x", F::iff(mem("x", y), F::conj(mem("x", a), phi)))));
}

Formula collection(const Formula& phi) {
  Namer nm = namer_for(phi, {"x", "y"});
  std::string a = nm("a"), b = nm("b");
  return F::forall(a, F::impl(F::bforall("x", V(a), F::exists("y", phi)),
                              F::exists(b, F::bforall("x", V(a), F::bexists("y", V(b), phi)))));
}

}  // namespace

Formula d0_separation_instance(const Formula& phi) {
  require_delta0(phi, "Delta0-Separation");
  return separation(phi);
}

Formula d0_collection_instance(const Formula& phi) {
  require_delta0(phi, "Delta0-Collection");
  return collection(phi);
}

Formula strong_collection_instance(const Formula& phi) {
  Namer nm = namer_for(phi, {"x", "y"});
  std::string a = nm("a"), b = nm("b");
  return F::forall(a, F::impl(F::bforall("x", V(a), F::exists("y", phi)),
                              F::exists(b, F::conj(F::bforall("x", V(a), F::bexists("y", V(b), phi)),
                                                   F::bforall("y", V(b), F::bexists("x", V(a), phi))))));
}

Formula subset_collection_instance(const Formula& psi) {
  Namer nm = namer_for(psi, {"x", "y", "u"});
  std::string a = nm("a"), b = nm("b"), c = nm("c"), d = nm("d");
  F hyp = F::bforall("x", V(a), F::bexists("y", V(b), psi));
  F con = F::bexists(d, V(c), F::conj(F::bforall("x", V(a), F::bexists("y", V(d), psi)),
                                      F::bforall("y", V(d), F::bexists("x", V(a), psi))));
  return F::forall(a, F::forall(b, F::exists(c, F::forall("u", F::impl(hyp, con)))));
}

std::vector<std::string> axiom_names() {
  return {"EmptySet", "Pairing",      "Union",        "Extensionality", "Infinity",
          "StrongInfinity", "PowerSet", "Exp",        "MP",             "AC",
          "SetInduction", "D0Separation", "D0Collection", "Separation", "Collection",
          "StrongCollection", "SubsetCollection"};
}

bool axiom_is_scheme(const std::string& n) {
  return n == "SetInduction" || n == "D0Separation" || n == "D0Collection" || n == "Separation" ||
         n == "Collection" || n == "StrongCollection" || n == "SubsetCollection";
}

bool axiom_needs_omega(const std::string& n) { return n == "Infinity" || n == "StrongInfinity" || n == "MP"; }

Formula axiom(const std::string& name, const std::optional<Formula>& matrix) {
  if (axiom_is_scheme(name)) {
    if (!matrix) throw Error("scheme " + name + " needs a matrix formula");
    check_language(*matrix, Language::Set);
    if (name == "SetInduction") return set_induction_instance(*matrix);
    if (name == "D0Separation") return d0_separation_instance(*matrix);
    if (name == "D0Collection") return d0_collection_instance(*matrix);
    if (name == "Separation") return separation(*matrix);
    if (name == "Collection") return collection(*matrix);
    if (name == "StrongCollection") return strong_collection_instance(*matrix);
    return subset_collection_instance(*matrix);
  }
  if (name == "EmptySet") return axiom_empty_set();
  if (name == "Pairing") return axiom_pairing();
  if (name == "Union") return axiom_union();
  if (name == "Extensionality") return axiom_extensionality();
  if (name == "Infinity") return axiom_infinity();
  if (name == "StrongInfinity") return axiom_strong_infinity();
  if (name == "PowerSet") return axiom_power_set();
  if (name == "Exp") return axiom_exp();
  if (name == "MP") return axiom_mp();
  if (name == "AC") return axiom_ac();
  throw Error("unknown axiom '" + name + "'");
}

std::vector<std::string> axiom_group(const std::string& name) {
  std::vector<std::string> ikp{"EmptySet", "Pairing", "Union", "Extensionality", "Infinity",
                               "SetInduction", "D0Separation", "D0Collection"};
  if (name == "ikp") return ikp;
  if (name == "ikp+") {
    ikp.push_back("StrongCollection");
    ikp.push_back("SubsetCollection");
    return ikp;
  }
  if (name == "czf")
    return {"Extensionality", "EmptySet", "Pairing", "Union", "StrongInfinity",
            "SetInduction", "D0Separation", "StrongCollection", "SubsetCollection"};
  if (name == "izf")
    return {"Extensionality", "Pairing", "Union", "EmptySet", "StrongInfinity",
            "Separation", "Collection", "SetInduction", "PowerSet"};
  throw Error("unknown axiom group '" + name + "'");
}

}  // namespace kripke
