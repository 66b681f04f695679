#pragma once

// Buttons, realization of monotone codes as classical-domain models, and
// the translation pipelines with their equivalence sweeps.
//
// Button i is psi_i = exists x (x = {ord(i+1)}). Its witness {ord(i+1)} is
// not an ordinal, so it never lies in the transitive closure of another
// witness or of an ordinal; buttons are independent over ordinal bases.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kripke/fo.hpp"
#include "kripke/prop.hpp"
#include "kripke/set_model.hpp"

namespace kripke {

Formula button_sentence(std::uint64_t i);
// psi_k for a term k denoting a natural: exists y (y = {succ(k)}).
Formula button_formula(const Term& k);
HFSet button_witness(std::uint64_t i);
// The i with x = {ord(i+1)}, if x is a button witness.
std::optional<std::uint64_t> button_index(HFSet x);

using MonotoneCode = std::vector<std::set<std::uint64_t>>;  // per node
bool is_monotone(const Frame& fr, const MonotoneCode& f);

Universe default_button_base();  // {0, 1, 2}
// M_v = tc-closure(base ∪ {witness(i) : i ∈ f(v)}).
SetKripkeModel realize_code(const Frame& fr, const MonotoneCode& f, const Universe& base = default_button_base());
// Buttons forced at v, read back by forcing psi_i for every i in `indices`.
std::set<std::uint64_t> forced_buttons(SetForcer& fz, int node, const std::set<std::uint64_t>& indices);

struct Translation {
  enum class Kind { Prop, FO, Relative, Equality };
  Kind kind = Kind::Prop;
  std::string E = "E";  // relativization predicate (Relative kind)
  std::map<std::string, Formula> letters;
  // symbol -> (formal variables, target formula over them)
  std::map<std::string, std::pair<std::vector<std::string>, Formula>> relations;

  // Homomorphic extension; atoms are replaced, = stays =, quantifiers are
  // kept. The Relative kind relativizes to E first.
  Formula apply(const Formula& f) const;
  Formula apply_homomorphic(const Formula& f) const;
};

struct EquivRow {
  std::string formula;
  int node;
  std::map<std::string, std::string> assignment;
  bool source;
  bool target;
};

struct EquivalenceReport {
  std::vector<EquivRow> rows;  // every comparison (kept for small sweeps)
  std::vector<EquivRow> mismatches;
  std::size_t checked = 0;
  std::vector<int> failing_nodes;  // nodes where the source refutes phi
  bool target_fails_there = true;
  std::string translated;
  std::map<std::string, std::string> renaming;
  bool ok() const { return mismatches.empty() && target_fails_there; }
};

// Letters are renamed to p0..pn (sorted order) before the code is built.
EquivalenceReport dejongh_prop_check(const PropModel& pm, const Formula& phi);

// <0,j> for j in D_v and <1,i,j..> for R_i(j..) true at v, relations in
// sorted name order.
MonotoneCode fo_code(const FOModel& m);
std::uint64_t domain_code(std::uint64_t j);
std::uint64_t predication_code(std::uint64_t i, const std::vector<std::uint64_t>& args);

Translation relative_translation(const FOModel& m, const std::string& E = "E");
EquivalenceReport dejongh_relative_check(const FOModel& m, const Formula& phi);

}  // namespace kripke
