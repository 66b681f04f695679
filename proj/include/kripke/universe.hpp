#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "kripke/hf.hpp"
#include "kripke/syntax.hpp"

namespace kripke {

using SetAssignment = std::map<std::string, HFSet>;

// A finite set of HF sets. Not necessarily transitive; use is_transitive()
// or build via universe_close / Universe::closure.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<HFSet> members);
  static Universe closure(std::span<const HFSet> seed);  // tc(seed) ∪ seed

  bool contains(HFSet x) const {
    return x.id() < mask_.size() && mask_.test(x.id());
  }
  const std::vector<HFSet>& members() const { return members_; }  // sorted by id
  std::size_t size() const { return members_.size(); }
  bool is_transitive() const;
  // (member, child) pairs witnessing non-transitivity
  std::vector<std::pair<HFSet, HFSet>> missing_children() const;
  bool subset_of(const Universe& o) const;
  Universe with(std::span<const HFSet> extra) const;  // transitive closure of union

  bool operator==(const Universe& o) const { return members_ == o.members_; }

 private:
  std::vector<HFSet> members_;
  boost::dynamic_bitset<> mask_;
};

struct ClosureOps {
  bool pairing = false;
  bool union_ = false;
  bool power_set = false;
};

inline constexpr std::size_t kDefaultSizeBudget = 200000;

// Least transitive superset of seed closed under the requested operations
// among sets of rank <= rank_cap. Throws BudgetError past size_budget.
Universe universe_close(std::span<const HFSet> seed, ClosureOps ops, std::uint32_t rank_cap,
                        std::size_t size_budget = kDefaultSizeBudget);

// V_n: all sets of rank < n.
Universe full_universe(unsigned n, std::size_t size_budget = kDefaultSizeBudget);

// Value of a set-language term; nullopt if undefined. Throws EvalError on
// an unassigned variable.
std::optional<HFSet> eval_term(const Term& t, const SetAssignment& a);

// Tarski satisfaction with quantifiers over u, membership actual and
// restricted to u, equality identity.
bool eval_classical(const Universe& u, const Formula& f, const SetAssignment& a = {});

}  // namespace kripke
