#pragma once

// Set-theoretic axioms and scheme instances. Scheme matrices use
// distinguished free variables: x for one-place schemes, x,y for
// collection, x,y,u for subset collection. Other free variables of a matrix
// stay free as parameters; the builders' own bound variables are chosen
// fresh so they never capture them.

#include <optional>
#include <string>
#include <vector>

#include "kripke/syntax.hpp"

namespace kripke {

// f : x -> y as a Delta0 formula with Kuratowski pairs.
Formula fun_formula(const Term& f, const Term& x, const Term& y);
// Ind(a): {} in a & forall x in a exists y in a (y = {x})
Formula ind_formula(const Term& a);

Formula axiom_empty_set();
Formula axiom_pairing();
Formula axiom_union();
Formula axiom_extensionality();
Formula axiom_infinity();
Formula axiom_strong_infinity();
Formula axiom_power_set();
Formula axiom_exp();
// Markov's principle with the natural numbers as the free variable `omega`.
Formula axiom_mp();
Formula axiom_ac();

Formula set_induction_instance(const Formula& phi);     // phi(x)
Formula d0_separation_instance(const Formula& phi);     // phi(x), Delta0
Formula d0_collection_instance(const Formula& phi);     // phi(x,y), Delta0
Formula strong_collection_instance(const Formula& phi); // phi(x,y)
Formula subset_collection_instance(const Formula& psi); // psi(x,y,u)

// By name: EmptySet, Pairing, Union, Extensionality, Infinity,
// StrongInfinity, PowerSet, Exp, MP, AC, SetInduction, D0Separation,
// D0Collection, StrongCollection, SubsetCollection (the last five need a
// matrix).
Formula axiom(const std::string& name, const std::optional<Formula>& matrix = std::nullopt);
bool axiom_is_scheme(const std::string& name);
// Infinity, StrongInfinity and MP quantify over omega.
bool axiom_needs_omega(const std::string& name);
std::vector<std::string> axiom_names();

// Named axiom groups for audits: ikp, ikp+, czf, izf. Scheme members are
// listed by name; instances come from the audit's matrices.
std::vector<std::string> axiom_group(const std::string& name);

}  // namespace kripke
