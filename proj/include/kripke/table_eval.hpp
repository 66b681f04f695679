#pragma once

// Bottom-up forcing tables over (node, assignment) for first-order style
// formulas on any Kripke structure with growing domains. Atoms are answered
// by a callback, so the same kernel serves FO models (relations), set models
// (membership) and translated formulas (atoms forced via a set model).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "kripke/exec.hpp"
#include "kripke/frame.hpp"
#include "kripke/syntax.hpp"

namespace kripke {

struct KripkeShape {
  Frame frame;
  std::size_t num_elems = 0;
  std::vector<std::vector<int>> domain;  // per node, element indices
  std::vector<std::vector<char>> in_domain;

  static KripkeShape make(Frame fr, std::size_t num_elems, std::vector<std::vector<int>> domain);
};

// Atom oracle: node, the atom, its free variables (sorted) and their
// element indices.
using AtomFn = std::function<bool(int node, const Formula& atom, const std::vector<std::string>& vars,
                                  const std::vector<int>& elems)>;
// Called once per worker thread so oracles may keep unsynchronized caches.
using AtomFactory = std::function<AtomFn()>;

struct Table {
  std::vector<std::string> vars;  // sorted free variables
  std::size_t nodes = 0;
  std::size_t elems = 0;
  std::size_t stride = 1;  // elems^|vars|
  std::vector<std::uint8_t> bits;

  std::size_t index(int node, const std::vector<int>& assignment) const;  // aligned with vars
  bool at(int node, const std::vector<int>& assignment) const { return bits[index(node, assignment)]; }
};

class TableEvaluator {
 public:
  TableEvaluator(KripkeShape shape, AtomFactory atoms, Exec exec = Exec::Parallel,
                 std::size_t entry_budget = std::size_t{1} << 27);

  // Children are cached; the result itself only if cache_result.
  std::shared_ptr<const Table> table(const Formula& f, bool cache_result = true);
  bool at(const Formula& f, int node, const std::map<std::string, int>& assignment);
  const KripkeShape& shape() const { return shape_; }
  void clear_cache() { cache_.clear(); }

 private:
  std::shared_ptr<const Table> compute(const Formula& f);

  KripkeShape shape_;
  AtomFactory atoms_;
  Exec exec_;
  std::size_t budget_;
  std::unordered_map<Formula, std::shared_ptr<const Table>, FormulaHash> cache_;
};

}  // namespace kripke
