#include "kripke/universe.hpp"

#include <algorithm>

#include "kripke/error.hpp"

namespace kripke {

Universe::Universe(std::vector<HFSet> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  std::size_t top = members_.empty() ? 0 : members_.back().id() + 1;
  mask_.resize(top);
  for (auto m : members_) mask_.set(m.id());
}

Universe Universe::closure(std::span<const HFSet> seed) { return Universe(tc_of(seed)); }

bool Universe::is_transitive() const {
  for (auto m : members_)
    for (auto c : m.element_ids())
      if (!contains(HFSet::from_id(c))) return false;
  return true;
}

std::vector<std::pair<HFSet, HFSet>> Universe::missing_children() const {
  std::vector<std::pair<HFSet, HFSet>> out;
  for (auto m : members_)
    for (auto c : m.element_ids())
      if (!contains(HFSet::from_id(c))) out.emplace_back(m, HFSet::from_id(c));
  return out;
}

bool Universe::subset_of(const Universe& o) const {
  return std::all_of(members_.begin(), members_.end(), [&](HFSet m) { return o.contains(m); });
}

Universe Universe::with(std::span<const HFSet> extra) const {
  std::vector<HFSet> all = members_;
  auto t = tc_of(extra);
  all.insert(all.end(), t.begin(), t.end());
  return Universe(std::move(all));
}

Universe universe_close(std::span<const HFSet> seed, ClosureOps ops, std::uint32_t rank_cap,
                        std::size_t size_budget) {
  for (auto s : seed)
    if (s.rank() > rank_cap) throw Error("seed set above rank cap");
  std::vector<HFSet> cur = tc_of(seed);
  auto check = [&](std::size_t n) {
    if (n > size_budget) throw BudgetError("universe closure exceeded size budget of " + std::to_string(size_budget));
  };
  check(cur.size());
  bool changed = true;
  while (changed) {
    changed = false;
    Universe u(cur);
    std::vector<HFSet> add;
    auto consider = [&](HFSet x) {
      if (x.rank() <= rank_cap && !u.contains(x)) add.push_back(x);
    };
    if (ops.pairing)
      for (std::size_t i = 0; i < cur.size(); ++i)
        for (std::size_t j = i; j < cur.size(); ++j) {
          if (std::max(cur[i].rank(), cur[j].rank()) + 1 > rank_cap) continue;
          consider(unordered_pair(cur[i], cur[j]));
          check(cur.size() + add.size());
        }
    if (ops.union_)
      for (auto x : cur) consider(set_union(x));
    if (ops.power_set)
      for (auto x : cur) {
        if (x.rank() + 1 > rank_cap) continue;
        if (x.size() > 20) throw BudgetError("power set of a set with more than 20 elements");
        auto elems = x.elements();
        std::size_t n = std::size_t{1} << elems.size();
        check(cur.size() + add.size() + n);
        std::vector<HFSet> subsets;
        for (std::size_t mask = 0; mask < n; ++mask) {
          std::vector<HFSet> sub;
          for (std::size_t k = 0; k < elems.size(); ++k)
            if (mask >> k & 1) sub.push_back(elems[k]);
          subsets.push_back(HFSet::make(std::move(sub)));
        }
        // P(x) itself; its tc brings the subsets
        consider(HFSet::make(std::move(subsets)));
      }
    if (!add.empty()) {
      auto extra = tc_of(add);
      cur.insert(cur.end(), extra.begin(), extra.end());
      std::sort(cur.begin(), cur.end());
      cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
      check(cur.size());
      changed = true;
    }
  }
  return Universe(std::move(cur));
}

Universe full_universe(unsigned n, std::size_t size_budget) {
  std::vector<HFSet> level;  // V_0
  for (unsigned k = 0; k < n; ++k) {
    if (level.size() > 20) throw BudgetError("V_n beyond n = 5 is too large");
    std::size_t m = std::size_t{1} << level.size();
    if (m > size_budget) throw BudgetError("V_n exceeds size budget");
    std::vector<HFSet> next;
    for (std::size_t mask = 0; mask < m; ++mask) {
      std::vector<HFSet> sub;
      for (std::size_t i = 0; i < level.size(); ++i)
        if (mask >> i & 1) sub.push_back(level[i]);
      next.push_back(HFSet::make(std::move(sub)));
    }
    level = std::move(next);
  }
  return Universe(std::move(level));
}

std::optional<HFSet> eval_term(const Term& t, const SetAssignment& a) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = a.find(t.name);
      if (it == a.end()) throw EvalError("unassigned variable '" + t.name + "'");
      return it->second;
    }
    case Term::Kind::Lit: return t.value;
    case Term::Kind::Const: throw EvalError("constant '" + t.name + "' has no set value");
    case Term::Kind::Fn: {
      std::vector<HFSet> vals;
      for (auto& x : t.args) {
        auto v = eval_term(x, a);
        if (!v) return std::nullopt;
        vals.push_back(*v);
      }
      return apply_builtin(t.name, vals);
    }
  }
  return std::nullopt;
}

namespace {

bool classical(const Universe& u, const Formula& f, SetAssignment& a) {
  switch (f.op()) {
    case Op::Bot: return false;
    case Op::Eq: {
      auto x = eval_term(f.terms()[0], a);
      auto y = eval_term(f.terms()[1], a);
      return x && y && *x == *y;
    }
    case Op::Mem: {
      auto x = eval_term(f.terms()[0], a);
      auto y = eval_term(f.terms()[1], a);
      return x && y && u.contains(*x) && u.contains(*y) && y->contains(*x);
    }
    case Op::And: return classical(u, f.lhs(), a) && classical(u, f.rhs(), a);
    case Op::Or: return classical(u, f.lhs(), a) || classical(u, f.rhs(), a);
    case Op::Impl: return !classical(u, f.lhs(), a) || classical(u, f.rhs(), a);
    case Op::Exists:
    case Op::Forall:
    case Op::BExists:
    case Op::BForall: {
      bool ex = f.op() == Op::Exists || f.op() == Op::BExists;
      std::optional<HFSet> bound;
      bool bounded = f.op() == Op::BExists || f.op() == Op::BForall;
      if (bounded) {
        bound = eval_term(f.bound(), a);
        if (!bound || !u.contains(*bound)) return !ex;
      }
      auto saved = a.find(f.name()) != a.end() ? std::optional<HFSet>(a[f.name()]) : std::nullopt;
      bool result = !ex;
      for (auto x : u.members()) {
        if (bounded && !bound->contains(x)) continue;
        a[f.name()] = x;
        bool b = classical(u, f.body(), a);
        if (ex && b) {
          result = true;
          break;
        }
        if (!ex && !b) {
          result = false;
          break;
        }
      }
      if (saved) a[f.name()] = *saved;
      else a.erase(f.name());
      return result;
    }
    default: throw LanguageError("eval_classical expects a set-language formula");
  }
}

}  // namespace

bool eval_classical(const Universe& u, const Formula& f, const SetAssignment& a) {
  SetAssignment env = a;
  return classical(u, f, env);
}

}  // namespace kripke
