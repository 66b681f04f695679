#pragma once

// Models and generators shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kripke/fo.hpp"
#include "kripke/frame.hpp"
#include "kripke/hf.hpp"
#include "kripke/prop.hpp"
#include "kripke/set_model.hpp"
#include "kripke/syntax.hpp"
#include "kripke/universe.hpp"

namespace fixtures {

using kripke::Formula;
using kripke::Frame;
using kripke::HFSet;
using kripke::SetKripkeModel;
using kripke::Term;
using kripke::Universe;

inline HFSet ord(std::size_t n) { return kripke::ordinal(n); }

inline std::vector<HFSet> pairs_over_2() {
  std::vector<HFSet> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out.push_back(kripke::kpair(ord(a), ord(b)));
  return out;
}

// The four functions 2 -> 2 as sets of pairs: swap, identity, const 0, const 1.
inline std::vector<HFSet> functions_2_to_2() {
  auto p = [](int a, int b) { return kripke::kpair(ord(a), ord(b)); };
  return {HFSet::make({p(0, 1), p(1, 0)}), HFSet::make({p(0, 0), p(1, 1)}), HFSet::make({p(0, 0), p(1, 0)}),
          HFSet::make({p(0, 1), p(1, 1)})};
}

// Chain of n nodes; node 0 holds 2 and the pairs over 2, node i adds the
// first i functions 2 -> 2. No node below the top holds every function.
inline SetKripkeModel exp_chain(std::size_t n) {
  auto seed = pairs_over_2();
  seed.push_back(ord(2));
  auto fns = functions_2_to_2();
  std::vector<Universe> us;
  for (std::size_t i = 0; i < n; ++i) {
    auto s = seed;
    for (std::size_t j = 0; j < i; ++j) s.push_back(fns.at(j));
    us.push_back(Universe::closure(s));
  }
  return kripke::build_classical_model(Frame::chain(n), us);
}

inline SetKripkeModel constant_model(const Frame& fr, const Universe& u) {
  return kripke::build_classical_model(fr, std::vector<Universe>(fr.size(), u));
}

inline SetKripkeModel vn_chain(std::vector<unsigned> ns) {
  std::vector<Universe> us;
  for (auto n : ns) us.push_back(kripke::full_universe(n));
  return kripke::build_classical_model(Frame::chain(ns.size()), us);
}

// Random Delta0 formula over the given free variables (at least one).
// Quantifiers are bounded by a variable already in scope.
inline Formula random_delta0(std::mt19937_64& rng, std::vector<std::string> scope, int depth, int& fresh) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto var = [&] { return Term::var(scope[pick(scope.size())]); };
  if (depth == 0 || pick(4) == 0) {
    switch (pick(5)) {
      case 0: return Formula::eq(var(), var());
      case 1: return Formula::bot();
      default: return Formula::mem(var(), var());
    }
  }
  switch (pick(6)) {
    case 0: return Formula::conj(random_delta0(rng, scope, depth - 1, fresh), random_delta0(rng, scope, depth - 1, fresh));
    case 1: return Formula::disj(random_delta0(rng, scope, depth - 1, fresh), random_delta0(rng, scope, depth - 1, fresh));
    case 2: return Formula::impl(random_delta0(rng, scope, depth - 1, fresh), random_delta0(rng, scope, depth - 1, fresh));
    case 3: return Formula::neg(random_delta0(rng, scope, depth - 1, fresh));
    default: {
      Term bound = var();
      std::string x = "z" + std::to_string(fresh++);
      scope.push_back(x);
      Formula body = random_delta0(rng, scope, depth - 1, fresh);
      return pick(2) ? Formula::bforall(x, bound, body) : Formula::bexists(x, bound, body);
    }
  }
}

// Random family of pairwise disjoint nonempty members of V_4 (rank <= 3).
inline HFSet random_disjoint_family(std::mt19937_64& rng, const Universe& v4) {
  std::vector<HFSet> cands;
  for (auto x : v4.members())
    if (!x.empty()) cands.push_back(x);
  std::shuffle(cands.begin(), cands.end(), rng);
  std::vector<HFSet> fam;
  std::size_t want = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
  for (auto x : cands) {
    if (fam.size() == want) break;
    bool disjoint = true;
    for (auto y : fam)
      for (auto e : x.elements())
        if (y.contains(e)) disjoint = false;
    if (disjoint) fam.push_back(x);
  }
  return HFSet::make(fam);
}

inline std::size_t uniform(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Random partial order on 1..max_nodes nodes (not necessarily rooted unless asked).
inline Frame random_frame(std::mt19937_64& rng, std::size_t max_nodes, bool rooted = false) {
  std::size_t n = 1 + uniform(rng, max_nodes);
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    le[i][i] = true;
    for (std::size_t j = i + 1; j < n; ++j) le[i][j] = (rooted && i == 0) || uniform(rng, 5) < 2;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (le[i][j]) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return Frame::from_indices(n, pairs);
}

inline kripke::NodeSet random_up_set(std::mt19937_64& rng, const Frame& fr) {
  kripke::NodeSet s = 0;
  for (std::size_t v = 0; v < fr.size(); ++v)
    if (uniform(rng, 3) == 0) s |= fr.up(static_cast<int>(v));
  return s;
}

inline Formula random_prop_formula(std::mt19937_64& rng, const std::vector<std::string>& letters, int depth) {
  if (depth == 0 || uniform(rng, 4) == 0)
    return uniform(rng, 6) == 0 ? Formula::bot() : Formula::prop(letters[uniform(rng, letters.size())]);
  auto sub = [&] { return random_prop_formula(rng, letters, depth - 1); };
  switch (uniform(rng, 4)) {
    case 0: return Formula::conj(sub(), sub());
    case 1: return Formula::disj(sub(), sub());
    case 2: return Formula::impl(sub(), sub());
    default: return Formula::neg(sub());
  }
}

inline kripke::PropModel random_prop_model(std::mt19937_64& rng, std::size_t max_nodes,
                                           const std::vector<std::string>& letters) {
  kripke::PropModel m;
  m.frame = random_frame(rng, max_nodes);
  for (auto& p : letters) m.valuation.sets[p] = random_up_set(rng, m.frame);
  return m;
}

// Random IQC model over P/1, R/2, q/0 with up to 3 elements; with
// congruence when eq is set. Relations are saturated so they are monotone
// and compatible with the congruence.
inline kripke::FOModel random_fo_model(std::mt19937_64& rng, std::size_t max_nodes, bool eq, bool rooted = false) {
  kripke::FOModel m;
  m.frame = random_frame(rng, max_nodes, rooted);
  std::size_t n = m.frame.size();
  std::vector<int> born(3);
  for (auto& b : born) b = static_cast<int>(uniform(rng, n));
  born[0] = 0;  // node 0 is minimal, so every domain is nonempty
  m.domains.assign(n, {});
  for (std::size_t w = 0; w < n; ++w)
    for (int e = 0; e < 3; ++e)
      for (std::size_t v = 0; v < n; ++v)
        if (m.frame.leq(static_cast<int>(v), static_cast<int>(w)) && born[e] == static_cast<int>(v)) {
          m.domains[w].push_back(e);
          break;
        }
  for (auto& d : m.domains) std::sort(d.begin(), d.end());
  // roots other than 0 may have empty domains; give them element 0
  for (std::size_t v = 0; v < n; ++v)
    if (m.domains[v].empty())
      for (std::size_t w = 0; w < n; ++w)
        if (m.frame.leq(static_cast<int>(v), static_cast<int>(w)) && !m.in_domain(static_cast<int>(w), 0)) {
          m.domains[w].insert(m.domains[w].begin(), 0);
        }
  auto& P = m.relation("P", 1);
  auto& R = m.relation("R", 2);
  auto& q = m.relation("q", 0);
  P.at.assign(n, {});
  R.at.assign(n, {});
  q.at.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    const auto& d = m.domains[v];
    for (int a : d) {
      if (uniform(rng, 4) == 0) P.at[v].insert({a});
      for (int b : d)
        if (uniform(rng, 6) == 0) R.at[v].insert({a, b});
    }
    if (uniform(rng, 4) == 0) q.at[v].insert({});
  }
  std::vector<std::set<std::pair<int, int>>> cong(n);
  if (eq)
    for (std::size_t v = 0; v < n; ++v) {
      for (int a : m.domains[v]) cong[v].insert({a, a});
      if (m.domains[v].size() >= 2 && uniform(rng, 3) == 0) {
        int a = m.domains[v][0], b = m.domains[v][1];
        cong[v].insert({a, b});
        cong[v].insert({b, a});
      }
    }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t w = 0; w < n; ++w) {
        if (!m.frame.leq(static_cast<int>(v), static_cast<int>(w))) continue;
        if (eq)
          for (auto pr : cong[v]) changed |= cong[w].insert(pr).second;
        for (auto* r : {&P, &R, &q})
          for (auto& t : std::set<kripke::Tuple>(r->at[v])) changed |= r->at[w].insert(t).second;
      }
    if (eq)
      for (std::size_t v = 0; v < n; ++v) {
        // transitivity of the (at most pairwise) merges
        for (auto [a, b] : std::set<std::pair<int, int>>(cong[v]))
          for (auto [c, d] : std::set<std::pair<int, int>>(cong[v]))
            if (b == c) changed |= cong[v].insert({a, d}).second;
        for (auto* r : {&P, &R})
          for (auto& t : std::set<kripke::Tuple>(r->at[v]))
            for (auto [x, y] : std::set<std::pair<int, int>>(cong[v]))
              for (std::size_t i = 0; i < t.size(); ++i)
                if (t[i] == x) {
                  kripke::Tuple u = t;
                  u[i] = y;
                  changed |= r->at[v].insert(u).second;
                }
      }
  }
  if (eq) m.congruence = cong;
  return m;
}

inline Formula random_fo_formula(std::mt19937_64& rng, std::vector<std::string> scope, int depth, bool eq,
                                 int& fresh) {
  auto var = [&] { return Term::var(scope[uniform(rng, scope.size())]); };
  if (depth == 0 || uniform(rng, 4) == 0) {
    switch (uniform(rng, eq ? 5 : 4)) {
      case 0: return Formula::bot();
      case 1: return Formula::pred("q", {});
      case 2: return Formula::pred("P", {var()});
      case 3: return Formula::pred("R", {var(), var()});
      default: return Formula::eq(var(), var());
    }
  }
  auto sub = [&](std::vector<std::string> sc) { return random_fo_formula(rng, sc, depth - 1, eq, fresh); };
  switch (uniform(rng, 6)) {
    case 0: return Formula::conj(sub(scope), sub(scope));
    case 1: return Formula::disj(sub(scope), sub(scope));
    case 2: return Formula::impl(sub(scope), sub(scope));
    case 3: return Formula::neg(sub(scope));
    default: {
      std::string x = "v" + std::to_string(fresh++);
      auto sc = scope;
      sc.push_back(x);
      Formula body = sub(sc);
      return uniform(rng, 2) ? Formula::forall(x, body) : Formula::exists(x, body);
    }
  }
}

// Random classical-domain model: universes are closures of random members
// of V_4, grown along the order.
inline SetKripkeModel random_set_model(std::mt19937_64& rng, std::size_t max_nodes) {
  static const Universe v4 = kripke::full_universe(4);
  Frame fr = random_frame(rng, max_nodes);
  std::size_t n = fr.size();
  std::vector<std::vector<HFSet>> seeds(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t k = 1 + uniform(rng, 3);
    for (std::size_t i = 0; i < k; ++i) seeds[v].push_back(v4.members()[uniform(rng, v4.size())]);
  }
  std::vector<Universe> us;
  for (std::size_t w = 0; w < n; ++w) {
    std::vector<HFSet> s;
    for (std::size_t v = 0; v < n; ++v)
      if (fr.leq(static_cast<int>(v), static_cast<int>(w))) s.insert(s.end(), seeds[v].begin(), seeds[v].end());
    us.push_back(Universe::closure(s));
  }
  return kripke::build_classical_model(fr, us);
}

// Random set-language formula: Delta0 pieces under unbounded quantifiers.
inline Formula random_set_formula(std::mt19937_64& rng, int depth, int& fresh) {
  std::string x = "u" + std::to_string(fresh++);
  if (depth <= 1) return Formula::exists(x, random_delta0(rng, {x}, 2, fresh));
  Formula a = random_set_formula(rng, depth - 1, fresh);
  Formula b = Formula::forall(x, Formula::impl(random_delta0(rng, {x}, 2, fresh), random_delta0(rng, {x}, 2, fresh)));
  switch (uniform(rng, 4)) {
    case 0: return Formula::conj(a, b);
    case 1: return Formula::disj(a, b);
    case 2: return Formula::impl(a, b);
    default: return Formula::neg(Formula::disj(a, b));
  }
}

}  // namespace fixtures
