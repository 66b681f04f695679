#include "kripke/table_eval.hpp"

#include <algorithm>

#include "kripke/error.hpp"

namespace kripke {

KripkeShape KripkeShape::make(Frame fr, std::size_t num_elems, std::vector<std::vector<int>> domain) {
  KripkeShape s;
  s.num_elems = num_elems;
  s.in_domain.assign(fr.size(), std::vector<char>(num_elems, 0));
  for (std::size_t v = 0; v < domain.size(); ++v)
    for (int e : domain[v]) s.in_domain[v][e] = 1;
  s.domain = std::move(domain);
  s.frame = std::move(fr);
  return s;
}

std::size_t Table::index(int node, const std::vector<int>& a) const {
  std::size_t idx = 0;
  for (std::size_t j = a.size(); j-- > 0;) idx = idx * elems + static_cast<std::size_t>(a[j]);
  return static_cast<std::size_t>(node) * stride + idx;
}

TableEvaluator::TableEvaluator(KripkeShape shape, AtomFactory atoms, Exec exec, std::size_t entry_budget)
    : shape_(std::move(shape)), atoms_(std::move(atoms)), exec_(exec), budget_(entry_budget) {}

std::shared_ptr<const Table> TableEvaluator::table(const Formula& f, bool cache_result) {
  auto it = cache_.find(f);
  if (it != cache_.end()) return it->second;
  auto t = compute(f);
  if (cache_result) cache_.emplace(f, t);
  return t;
}

bool TableEvaluator::at(const Formula& f, int node, const std::map<std::string, int>& assignment) {
  auto t = table(f);
  std::vector<int> a;
  for (auto& v : t->vars) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw EvalError("unassigned variable '" + v + "'");
    a.push_back(it->second);
  }
  return t->at(node, a);
}

namespace {

// Position of each child variable inside the parent's assignment; the
// quantified variable (absent from the parent) maps to -1.
std::vector<int> positions(const std::vector<std::string>& child, const std::vector<std::string>& parent) {
  std::vector<int> pos;
  for (auto& v : child) {
    auto it = std::find(parent.begin(), parent.end(), v);
    pos.push_back(it == parent.end() ? -1 : static_cast<int>(it - parent.begin()));
  }
  return pos;
}

std::size_t child_offset(const Table& c, const std::vector<int>& pos, const std::vector<int>& digits, int extra) {
  std::size_t idx = 0;
  for (std::size_t j = pos.size(); j-- > 0;) {
    int d = pos[j] < 0 ? extra : digits[pos[j]];
    idx = idx * c.elems + static_cast<std::size_t>(d);
  }
  return idx;
}

}  // namespace

std::shared_ptr<const Table> TableEvaluator::compute(const Formula& f) {
  auto t = std::make_shared<Table>();
  t->vars = free_vars(f);
  t->nodes = shape_.frame.size();
  t->elems = shape_.num_elems;
  t->stride = 1;
  for (std::size_t i = 0; i < t->vars.size(); ++i) {
    if (t->elems && t->stride > budget_ / std::max<std::size_t>(t->elems, 1))
      throw BudgetError("forcing table exceeds entry budget");
    t->stride *= t->elems;
  }
  if (t->stride * t->nodes > budget_) throw BudgetError("forcing table exceeds entry budget");
  t->bits.assign(t->stride * t->nodes, 0);

  // child tables first (serial over subformulas, parallel within each)
  std::shared_ptr<const Table> a, b;
  Formula af, bf;
  switch (f.op()) {
    case Op::And:
    case Op::Or:
    case Op::Impl:
      a = table(f.lhs());
      b = table(f.rhs());
      break;
    case Op::Exists:
    case Op::Forall: a = table(f.body()); break;
    case Op::BExists:
    case Op::BForall: {
      Formula d = desugar(f);
      auto dt = table(d);
      auto copy = std::make_shared<Table>(*dt);
      return copy;
    }
    default: break;
  }
  std::vector<int> pa = a ? positions(a->vars, t->vars) : std::vector<int>{};
  std::vector<int> pb = b ? positions(b->vars, t->vars) : std::vector<int>{};

  const KripkeShape& s = shape_;
  const std::size_t k = t->vars.size();
  const std::int64_t total = static_cast<std::int64_t>(t->bits.size());
  Table* out = t.get();
  const bool atom = f.is_atom();

#pragma omp parallel if (exec_ == Exec::Parallel)
  {
    AtomFn oracle;
    if (atom && f.op() != Op::Bot) oracle = atoms_();
    std::vector<int> digits(k);
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t e = 0; e < total; ++e) {
      std::size_t rest = static_cast<std::size_t>(e);
      int node = static_cast<int>(rest / out->stride);
      rest %= out->stride;
      bool defined = true;
      for (std::size_t j = 0; j < k; ++j) {
        digits[j] = static_cast<int>(rest % out->elems);
        rest /= out->elems;
        if (!s.in_domain[node][digits[j]]) defined = false;
      }
      if (!defined) continue;
      bool r = false;
      switch (f.op()) {
        case Op::Bot: r = false; break;
        case Op::Prop:
        case Op::Pred:
        case Op::Eq:
        case Op::Mem: r = oracle(node, f, out->vars, digits); break;
        case Op::And:
        case Op::Or: {
          bool x = a->bits[node * a->stride + child_offset(*a, pa, digits, 0)];
          bool y = b->bits[node * b->stride + child_offset(*b, pb, digits, 0)];
          r = f.op() == Op::And ? (x && y) : (x || y);
          break;
        }
        case Op::Impl: {
          std::size_t oa = child_offset(*a, pa, digits, 0);
          std::size_t ob = child_offset(*b, pb, digits, 0);
          r = true;
          NodeSet up = s.frame.up(node);
          for (int w = 0; up && r; ++w, up >>= 1)
            if ((up & 1) && a->bits[w * a->stride + oa] && !b->bits[w * b->stride + ob]) r = false;
          break;
        }
        case Op::Exists: {
          for (int x : s.domain[node])
            if (a->bits[node * a->stride + child_offset(*a, pa, digits, x)]) {
              r = true;
              break;
            }
          break;
        }
        case Op::Forall: {
          r = true;
          NodeSet up = s.frame.up(node);
          for (int w = 0; up && r; ++w, up >>= 1) {
            if (!(up & 1)) continue;
            for (int x : s.domain[w])
              if (!a->bits[w * a->stride + child_offset(*a, pa, digits, x)]) {
                r = false;
                break;
              }
          }
          break;
        }
        default: break;
      }
      out->bits[e] = r;
    }
  }
  return t;
}

}  // namespace kripke
