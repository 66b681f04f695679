#include "kripke/prop.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <unordered_map>

#include "kripke/error.hpp"

namespace kripke {

PropProgram::PropProgram(const Formula& f) {
  check_language(f, Language::Prop);
  letters_ = kripke::letters(f);
  subs_ = kripke::subformulas(f);
  std::unordered_map<Formula, int, FormulaHash> slot;
  for (std::size_t i = 0; i < subs_.size(); ++i) {
    const Formula& g = subs_[i];
    Instr in{g.op()};
    if (g.op() == Op::Prop) {
      in.a = static_cast<int>(std::lower_bound(letters_.begin(), letters_.end(), g.name()) - letters_.begin());
    } else if (!g.is_atom()) {
      in.a = slot.at(g.lhs());
      in.b = slot.at(g.rhs());
    }
    slot.emplace(g, static_cast<int>(i));
    code_.push_back(in);
  }
}

std::vector<NodeSet> PropProgram::table(const Frame& fr, const std::vector<NodeSet>& ls) const {
  std::vector<NodeSet> t(code_.size(), 0);
  const int n = static_cast<int>(fr.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    switch (in.op) {
      case Op::Bot: t[i] = 0; break;
      case Op::Prop: t[i] = ls[in.a]; break;
      case Op::And: t[i] = t[in.a] & t[in.b]; break;
      case Op::Or: t[i] = t[in.a] | t[in.b]; break;
      case Op::Impl: {
        NodeSet bad = t[in.a] & ~t[in.b];
        NodeSet r = 0;
        for (int v = 0; v < n; ++v)
          if (!(fr.up(v) & bad)) r |= NodeSet{1} << v;
        t[i] = r;
        break;
      }
      default: throw LanguageError("non-propositional node");
    }
  }
  return t;
}

NodeSet PropProgram::eval(const Frame& fr, const std::vector<NodeSet>& ls) const { return table(fr, ls).back(); }

namespace {

std::vector<NodeSet> letter_sets(const PropProgram& p, const Valuation& v) {
  std::vector<NodeSet> out;
  for (auto& l : p.letters()) out.push_back(v.at(l));
  return out;
}

}  // namespace

NodeSet forcing_set(const PropModel& m, const Formula& f) {
  PropProgram p(f);
  return p.eval(m.frame, letter_sets(p, m.valuation));
}

bool force_prop(const PropModel& m, int node, const Formula& f) {
  if (node < 0 || node >= static_cast<int>(m.frame.size())) throw ModelError("unknown node index");
  return forcing_set(m, f) >> node & 1;
}

bool force_prop(const PropModel& m, const std::string& node, const Formula& f) {
  return force_prop(m, m.frame.index(node), f);
}

std::optional<PersistenceCounterexample> check_persistence(const PropModel& m, const Formula& f) {
  PropProgram p(f);
  auto t = p.table(m.frame, letter_sets(p, m.valuation));
  const int n = static_cast<int>(m.frame.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    for (int v = 0; v < n; ++v)
      if (t[i] >> v & 1)
        for (int w = 0; w < n; ++w)
          if (m.frame.leq(v, w) && !(t[i] >> w & 1)) return PersistenceCounterexample{p.subformulas()[i], v, w};
  return std::nullopt;
}

bool frame_validates(const Frame& fr, const Formula& f, Exec exec) {
  PropProgram p(f);
  ValuationEnumerator en(fr, p.letters());
  const NodeSet all = fr.all();
  const std::int64_t total = static_cast<std::int64_t>(en.size());
  std::atomic<bool> refuted{false};
#pragma omp parallel for schedule(dynamic, 64) if (exec == Exec::Parallel)
  for (std::int64_t i = 0; i < total; ++i) {
    if (refuted.load(std::memory_order_relaxed)) continue;
    std::vector<NodeSet> ls;
    en.fill(static_cast<std::uint64_t>(i), ls);
    if (p.eval(fr, ls) != all) refuted.store(true, std::memory_order_relaxed);
  }
  return !refuted.load();
}

namespace {

// Smallest valuation index refuting f at the root, or -1.
std::int64_t first_refutation(const Frame& fr, const PropProgram& p, int root, Exec exec) {
  ValuationEnumerator en(fr, p.letters());
  const std::int64_t total = static_cast<std::int64_t>(en.size());
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
#pragma omp parallel for schedule(dynamic, 64) reduction(min : best) if (exec == Exec::Parallel)
  for (std::int64_t i = 0; i < total; ++i) {
    if (i >= best) continue;
    std::vector<NodeSet> ls;
    en.fill(static_cast<std::uint64_t>(i), ls);
    if (!(p.eval(fr, ls) >> root & 1)) best = std::min(best, i);
  }
  return best == std::numeric_limits<std::int64_t>::max() ? -1 : best;
}

}  // namespace

Decision ipc_decide(const Formula& f, int bound, Exec exec) {
  if (bound < 1) throw Error("bound must be at least 1");
  PropProgram p(f);
  Decision d;
  d.bound = bound;
  for (int n = 1; n <= bound; ++n) {
    for (const Frame& fr : rooted_frames(static_cast<std::size_t>(n))) {
      ++d.frames_checked;
      std::int64_t i = first_refutation(fr, p, 0, exec);
      if (i >= 0) {
        ValuationEnumerator en(fr, p.letters());
        d.valid = false;
        d.countermodel = PropModel{fr, en.at(static_cast<std::uint64_t>(i))};
        d.refuting_node = 0;
        return d;
      }
    }
  }
  return d;
}

bool classical_tautology(const Formula& f) {
  // a one-node frame is a classical world
  return frame_validates(Frame::chain(1), f, Exec::Serial);
}

nlohmann::json prop_model_to_json(const PropModel& m) {
  nlohmann::json j = frame_to_json(m.frame);
  nlohmann::json val = nlohmann::json::object();
  for (auto& [p, s] : m.valuation.sets) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t v = 0; v < m.frame.size(); ++v)
      if (s >> v & 1) nodes.push_back(m.frame.name(static_cast<int>(v)));
    val[p] = nodes;
  }
  j["valuation"] = val;
  return j;
}

PropModel prop_model_from_json(const nlohmann::json& j) {
  PropModel m{frame_from_json(j), {}};
  if (j.contains("valuation"))
    for (auto& [p, nodes] : j.at("valuation").items()) {
      NodeSet s = 0;
      for (auto& n : nodes) s |= NodeSet{1} << m.frame.index(n.get<std::string>());
      m.valuation.sets[p] = s;
    }
  if (!is_persistent(m.frame, m.valuation)) throw ModelError("valuation is not upward closed");
  return m;
}

}  // namespace kripke
