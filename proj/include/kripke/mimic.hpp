#pragma once

// Set models that mimic a finite rooted equality-free first-order Kripke
// model M. Every node y gets the index f(y) = 1 + k*idx(y) (root first,
// k = max(2, max |D*_y|)). The root universe holds a package
//   pair(TAG, pair(ord(gamma), pair(ord(k), CODE)))
// describing M, plus all ordinals up to the last window. Node y adds the
// window sets W_{y,0} = {ord(gamma+f(y)+1)}, W_{y,j+1} = {W_{y,j}} for
// j < |D*_y|; W_{y,0} is the witness of button gamma+f(y), so passing y is
// visible to the formulas. A set x born at y with rank gamma+f(y)+2+r is sent
// to the r-th element of D*_y; ordinals and low-rank root sets go to residue
// 0 of the root.
//
// Before coding, M is normalized by projection-preserving clones so that every
// element has a unique birth node, every D*_y is nonempty and |D*_root| >= 2.

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "kripke/dejongh.hpp"
#include "kripke/fo.hpp"
#include "kripke/set_model.hpp"

namespace kripke {

struct CodedRow {
  int node;                                  // first node where the tuple holds
  std::vector<std::pair<int, int>> cells;    // (residue, birth node) per argument
};

struct CodedModel {
  FOModel original;
  FOModel source;                   // normalized model M'
  std::map<int, int> origin;        // element of M' -> element of M
  std::vector<int> order;           // idx -> node (root first)
  std::vector<std::uint64_t> f;     // per node
  std::uint64_t k = 2, gamma = 0;
  std::vector<std::vector<int>> dstar;  // per node, D*_y in residue order
  std::vector<std::string> symbols;     // relation names; index = signature index
  std::vector<std::vector<CodedRow>> rows;  // per symbol
  HFSet tag, code, package;

  std::uint64_t start(int node) const { return gamma + f[node] + 2; }
  int birth_of(int elem) const;  // in M'
  int residue_of(int elem) const;
};

// Throws ModelError for equality, an unrooted frame or an empty root domain.
CodedModel encode_coded_model(const FOModel& m);
// Decodes the rows back and compares with M' at every node.
bool coded_consistent(const CodedModel& c);
HFSet mimic_tag();

struct MimicMaps {
  std::vector<std::vector<HFSet>> born;        // per node, sets first appearing there
  std::unordered_map<HFSet, int, HFSetHash> birth;   // computed from rank windows
  std::unordered_map<HFSet, int, HFSetHash> residue;
  std::vector<std::unordered_map<HFSet, int, HFSetHash>> g;  // per node: M_v -> D_v of M
};

struct Mimic {
  CodedModel coded;
  std::shared_ptr<const SetKripkeModel> model;
  MimicMaps maps;
  Translation tau;  // P(x..) -> phi_P(x..)
};

Mimic mimic_build(const FOModel& m);

// Formulas read off the package (located by its tag).
Formula mimic_passed(const CodedModel& c, int node);   // forced at v iff node <= v
Formula mimic_birth(const CodedModel& c, int node, const std::string& x = "x");  // x born at node
Formula mimic_residue(const CodedModel& c, int r, const std::string& x = "x");
Formula mimic_exists(const CodedModel& c, const std::string& x = "x");  // x lies in some passed node's stock
Formula mimic_phi(const CodedModel& c, const std::string& symbol);   // free x0..x{n-1}

struct MimicCheck {
  std::size_t formulas = 0;
  std::size_t checked = 0;  // (formula, node, assignment) comparisons
  std::vector<EquivRow> mismatches;
  std::vector<std::string> map_errors;  // birth/residue/surjectivity/coding problems
  bool ok() const { return mismatches.empty() && map_errors.empty(); }
};

// Static checks of the construction: computed births match first
// appearance, every g_v is onto D_v, the coded table decodes to M'.
std::vector<std::string> mimic_map_errors(const Mimic& mm);

// Compares forcing of tau(phi) at (v, xs) with forcing of phi at (v, g_v(xs))
// for every formula, node and assignment into M_v.
MimicCheck mimic_check(const Mimic& mm, const std::vector<Formula>& formulas, Exec exec = Exec::Parallel);

inline constexpr int kMaxExhaustiveDepth = 2;
// All equality-free formulas of depth <= depth over the relations of m and
// the variables; throws BudgetError beyond kMaxExhaustiveDepth.
std::vector<Formula> enumerate_formulas(const std::map<std::string, int>& arities,
                                        const std::vector<std::string>& vars, int depth);
Formula random_formula(std::mt19937_64& rng, const std::map<std::string, int>& arities,
                       const std::vector<std::string>& vars, int depth);
std::map<std::string, int> signature_of(const FOModel& m);

}  // namespace kripke
