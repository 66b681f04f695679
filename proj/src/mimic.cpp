#include "kripke/mimic.hpp"

#include <omp.h>

#include <algorithm>
#include <set>
#include <unordered_set>

#include "kripke/error.hpp"
#include "kripke/table_eval.hpp"

namespace kripke {

namespace {

HFSet O(std::uint64_t n) { return ordinal(static_cast<std::size_t>(n)); }

HFSet set_of(std::vector<HFSet> xs) { return HFSet::make(std::move(xs)); }

struct Normalized {
  FOModel model;
  std::map<int, int> origin;
  std::vector<int> birth;  // per new element
};

// Clones so that births are unique, every D*_y is nonempty and the root has at
// least two fresh elements. Tuples hold iff their projection holds.
Normalized normalize(const FOModel& m) {
  const Frame& fr = m.frame;
  const int n = static_cast<int>(fr.size());
  const int root = fr.roots()[0];
  Normalized out;
  auto add = [&](int orig, int b) {
    int id = static_cast<int>(out.birth.size());
    out.birth.push_back(b);
    out.origin[id] = orig;
  };
  std::set<int> elems;
  for (auto& d : m.domains) elems.insert(d.begin(), d.end());
  for (int e : elems) {
    std::vector<int> present;
    for (int v = 0; v < n; ++v)
      if (m.in_domain(v, e)) present.push_back(v);
    for (int b : present) {
      bool minimal = std::none_of(present.begin(), present.end(), [&](int u) { return u != b && fr.leq(u, b); });
      if (minimal) add(e, b);
    }
  }
  auto born_at = [&](int v) {
    int c = 0;
    for (int b : out.birth) c += b == v;
    return c;
  };
  for (int v = 0; v < n; ++v)
    if (born_at(v) == 0) add(m.domains[v].front(), v);
  while (born_at(root) < 2) add(m.domains[root].front(), root);

  FOModel& r = out.model;
  r.frame = fr;
  r.domains.assign(n, {});
  for (int id = 0; id < static_cast<int>(out.birth.size()); ++id)
    for (int v = 0; v < n; ++v)
      if (fr.leq(out.birth[id], v)) r.domains[v].push_back(id);
  for (auto& [name, rel] : m.relations) {
    Relation nr;
    nr.arity = rel.arity;
    nr.at.assign(n, {});
    for (int v = 0; v < n; ++v) {
      std::map<int, std::vector<int>> lifts;
      for (int id : r.domains[v]) lifts[out.origin[id]].push_back(id);
      for (const Tuple& t : rel.at[v]) {
        std::vector<std::size_t> pos(t.size(), 0);
        while (true) {
          Tuple nt;
          for (std::size_t i = 0; i < t.size(); ++i) nt.push_back(lifts[t[i]][pos[i]]);
          nr.at[v].insert(nt);
          std::size_t i = 0;
          while (i < t.size() && ++pos[i] == lifts[t[i]].size()) pos[i++] = 0;
          if (i == t.size()) break;
        }
      }
    }
    r.relations[name] = std::move(nr);
  }
  require_valid(r);
  return out;
}

HFSet args_code(const std::vector<std::pair<int, int>>& cells, const CodedModel& c, std::size_t i) {
  if (i == cells.size()) return HFSet();
  auto [res, b] = cells[i];
  return kpair(kpair(O(res), O(c.f[b])), args_code(cells, c, i + 1));
}

// ---------------------------------------------------------------- formulas

using F = Formula;
Term V(const std::string& n) { return Term::var(n); }
Term L(std::uint64_t n) { return Term::lit(O(n)); }
Term fn(const char* name, std::vector<Term> a) { return Term::fn(name, std::move(a)); }
Term fst(Term t) { return fn("fst", {std::move(t)}); }
Term snd(Term t) { return fn("snd", {std::move(t)}); }

struct Pkg {
  Term p = V("p");
  Term gamma() const { return fst(snd(p)); }
  Term k() const { return fst(snd(snd(p))); }
  Term code() const { return snd(snd(snd(p))); }
  Term kset() const { return fst(code()); }
  Term tt() const { return snd(snd(snd(code()))); }
  Term start(Term u) const { return fn("add", {gamma(), fn("add", {std::move(u), L(2)})}); }
};

F with_package(const HFSet& tag, F body) {
  return F::exists("p", F::conj(F::eq(fst(V("p")), Term::lit(tag)), std::move(body)));
}

F is_ord(const std::string& x) { return F::eq(V(x), fn("rank", {V(x)})); }

F passed(const Pkg& pk, Term w) { return button_formula(fn("add", {pk.gamma(), std::move(w)})); }

// x born at the node with index term u
F birth_term(const Pkg& pk, const std::string& x, const Term& u) {
  Term rk = fn("rank", {V(x)});
  F below_end = F::mem(rk, fn("add", {pk.start(u), pk.k()}));
  F root = F::conj(F::eq(u, L(1)), F::disj(is_ord(x), below_end));
  F in_window = F::conj(F::conj(F::neg(is_ord(x)), F::disj(F::mem(pk.start(u), rk), F::eq(pk.start(u), rk))), below_end);
  return F::disj(root, in_window);
}

// x has residue r at the node with index term u
F match(const Pkg& pk, const std::string& x, const Term& cell) {
  Term u = snd(cell), r = fst(cell), rk = fn("rank", {V(x)});
  F window = F::conj(F::neg(is_ord(x)), F::eq(rk, fn("add", {pk.start(u), r})));
  F low = F::conj(F::conj(F::eq(u, L(1)), F::eq(r, L(0))), F::disj(is_ord(x), F::mem(rk, pk.start(u))));
  return F::disj(window, low);
}

}  // namespace

HFSet mimic_tag() { return set_of({O(3), singleton(singleton(O(2)))}); }

int CodedModel::birth_of(int elem) const {
  for (std::size_t v = 0; v < dstar.size(); ++v)
    if (std::find(dstar[v].begin(), dstar[v].end(), elem) != dstar[v].end()) return static_cast<int>(v);
  throw ModelError("element " + std::to_string(elem) + " has no birth node");
}

int CodedModel::residue_of(int elem) const {
  auto& d = dstar[birth_of(elem)];
  return static_cast<int>(std::find(d.begin(), d.end(), elem) - d.begin());
}

CodedModel encode_coded_model(const FOModel& m) {
  require_valid(m);
  if (m.has_equality()) throw ModelError("mimic models need an equality-free source");
  if (!m.frame.is_rooted()) throw ModelError("mimic models need a rooted frame");
  const int root = m.frame.roots()[0];
  if (m.domains[root].empty()) throw ModelError("mimic models need a nonempty root domain");
  CodedModel c;
  c.original = m;
  Normalized nm = normalize(m);
  c.source = std::move(nm.model);
  c.origin = std::move(nm.origin);
  const int n = static_cast<int>(m.frame.size());
  c.order.push_back(root);
  for (int v = 0; v < n; ++v)
    if (v != root) c.order.push_back(v);
  c.dstar.assign(n, {});
  for (int id = 0; id < static_cast<int>(nm.birth.size()); ++id) c.dstar[nm.birth[id]].push_back(id);
  std::size_t maxd = 0;
  for (auto& d : c.dstar) maxd = std::max(maxd, d.size());
  c.k = std::max<std::uint64_t>(2, maxd);
  c.f.assign(n, 0);
  for (int i = 0; i < n; ++i) c.f[c.order[i]] = 1 + c.k * static_cast<std::uint64_t>(i);

  std::vector<HFSet> kset, leq, fset, tt;
  for (int v = 0; v < n; ++v) {
    kset.push_back(O(c.f[v]));
    fset.push_back(kpair(O(c.f[v]), O(c.dstar[v].size())));
  }
  for (auto [u, w] : m.frame.pairs()) leq.push_back(kpair(O(c.f[u]), O(c.f[w])));
  std::uint64_t i = 0;
  for (auto& [name, rel] : c.source.relations) {
    c.symbols.push_back(name);
    std::vector<CodedRow> rows;
    std::vector<HFSet> coded;
    for (int w = 0; w < n; ++w)
      for (const Tuple& t : rel.at[w]) {
        bool first = true;
        for (int u = 0; u < n; ++u)
          if (u != w && m.frame.leq(u, w) && rel.holds(u, t)) first = false;
        if (!first) continue;
        CodedRow row{w, {}};
        for (int e : t) row.cells.push_back({c.residue_of(e), c.birth_of(e)});
        coded.push_back(kpair(O(c.f[w]), args_code(row.cells, c, 0)));
        rows.push_back(std::move(row));
      }
    c.rows.push_back(std::move(rows));
    tt.push_back(kpair(O(i++), set_of(coded)));
  }
  c.code = kpair(set_of(kset), kpair(set_of(leq), kpair(set_of(fset), set_of(tt))));
  c.tag = mimic_tag();
  c.gamma = std::max<std::uint64_t>({c.code.rank(), c.k, c.tag.rank()}) + 2;
  c.package = kpair(c.tag, kpair(O(c.gamma), kpair(O(c.k), c.code)));
  return c;
}

bool coded_consistent(const CodedModel& c) {
  const Frame& fr = c.source.frame;
  const int n = static_cast<int>(fr.size());
  for (std::size_t i = 0; i < c.symbols.size(); ++i) {
    const Relation& rel = c.source.relations.at(c.symbols[i]);
    for (int v = 0; v < n; ++v) {
      std::set<Tuple> decoded;
      for (auto& row : c.rows[i]) {
        if (!fr.leq(row.node, v)) continue;
        Tuple t;
        for (auto [r, b] : row.cells) {
          if (r >= static_cast<int>(c.dstar[b].size())) return false;
          t.push_back(c.dstar[b][r]);
        }
        decoded.insert(t);
      }
      if (decoded != rel.at[v]) return false;
    }
  }
  return true;
}

Formula mimic_passed(const CodedModel& c, int node) {
  Pkg pk;
  return with_package(c.tag, passed(pk, L(c.f.at(node))));
}

Formula mimic_birth(const CodedModel& c, int node, const std::string& x) {
  Pkg pk;
  return with_package(c.tag, birth_term(pk, x, L(c.f.at(node))));
}

Formula mimic_residue(const CodedModel& c, int r, const std::string& x) {
  Pkg pk;
  Term rk = fn("rank", {V(x)});
  F window = F::conj(F::neg(is_ord(x)), F::bexists("u", pk.kset(), F::eq(rk, fn("add", {pk.start(V("u")), L(r)}))));
  if (r == 0) window = F::disj(window, F::disj(is_ord(x), F::mem(rk, pk.start(L(1)))));
  return with_package(c.tag, window);
}

Formula mimic_exists(const CodedModel& c, const std::string& x) {
  Pkg pk;
  return with_package(c.tag, F::bexists("u", pk.kset(), F::conj(passed(pk, V("u")), birth_term(pk, x, V("u")))));
}

Formula mimic_phi(const CodedModel& c, const std::string& symbol) {
  auto it = std::find(c.symbols.begin(), c.symbols.end(), symbol);
  if (it == c.symbols.end()) throw LanguageError("no symbol '" + symbol + "' in the coded model");
  const auto i = static_cast<std::uint64_t>(it - c.symbols.begin());
  const int arity = c.source.relations.at(symbol).arity;
  Pkg pk;
  F body = passed(pk, fst(V("row")));
  Term args = snd(V("row"));
  for (int j = 0; j < arity; ++j) {
    body = F::conj(body, match(pk, "x" + std::to_string(j), fst(args)));
    args = snd(args);
  }
  F entry = F::conj(F::eq(fst(V("e")), L(i)), F::bexists("row", snd(V("e")), body));
  return with_package(c.tag, F::bexists("e", pk.tt(), entry));
}

Mimic mimic_build(const FOModel& m) {
  Mimic mm;
  mm.coded = encode_coded_model(m);
  const CodedModel& c = mm.coded;
  const Frame& fr = m.frame;
  const int n = static_cast<int>(fr.size());
  const int root = c.order[0];

  std::uint64_t fmax = *std::max_element(c.f.begin(), c.f.end());
  std::uint64_t top = c.gamma + fmax + c.k + 3;
  std::vector<std::vector<HFSet>> windows(n);
  for (int y = 0; y < n; ++y) {
    HFSet w = singleton(O(c.gamma + c.f[y] + 1));
    for (std::size_t j = 0; j < c.dstar[y].size(); ++j) {
      windows[y].push_back(w);
      w = singleton(w);
    }
  }
  SoundAssignment asg;
  for (int v = 0; v < n; ++v) {
    std::vector<HFSet> seed{c.package, O(top)};
    for (int y = 0; y < n; ++y)
      if (fr.leq(y, v)) seed.insert(seed.end(), windows[y].begin(), windows[y].end());
    asg.push_back(Universe::closure(seed));
  }
  mm.model = std::make_shared<const SetKripkeModel>(build_classical_model(fr, std::move(asg)));

  // births and residues from rank windows
  MimicMaps& mp = mm.maps;
  mp.born.assign(n, {});
  mp.g.assign(n, {});
  std::set<HFSet> all;
  for (int v = 0; v < n; ++v)
    for (HFSet x : mm.model->D(v).members()) all.insert(x);
  for (HFSet x : all) {
    int b = root;
    int r = 0;
    if (!x.is_ordinal()) {
      std::uint64_t rk = x.rank();
      for (int y = 0; y < n; ++y)
        if (y != root && rk >= c.start(y) && rk < c.start(y) + c.k) b = y;
      if (rk >= c.start(b)) r = static_cast<int>(rk - c.start(b));
    }
    mp.birth[x] = b;
    mp.residue[x] = r;
  }
  for (int v = 0; v < n; ++v)
    for (HFSet x : mm.model->D(v).members()) {
      bool earlier = false;
      for (int u = 0; u < n; ++u)
        if (u != v && fr.leq(u, v) && mm.model->D(u).contains(x)) earlier = true;
      if (!earlier) mp.born[v].push_back(x);
      const auto& d = c.dstar[mp.birth[x]];
      int r = mp.residue[x];
      if (r < static_cast<int>(d.size())) mp.g[v][x] = c.origin.at(d[r]);
    }

  mm.tau.kind = Translation::Kind::FO;
  for (auto& name : c.symbols) {
    std::vector<std::string> formals;
    for (int j = 0; j < c.source.relations.at(name).arity; ++j) formals.push_back("x" + std::to_string(j));
    mm.tau.relations[name] = {formals, mimic_phi(c, name)};
  }
  return mm;
}

std::vector<std::string> mimic_map_errors(const Mimic& mm) {
  std::vector<std::string> errs;
  const CodedModel& c = mm.coded;
  const SetKripkeModel& sm = *mm.model;
  const Frame& fr = sm.frame;
  const int n = static_cast<int>(fr.size());
  if (!coded_consistent(c)) errs.push_back("coded table does not decode to the normalized model");
  for (int v = 0; v < n; ++v) {
    for (HFSet x : mm.maps.born[v])
      if (mm.maps.birth.at(x) != v)
        errs.push_back("set " + to_literal(x) + " first appears at " + fr.name(v) + " but its rank window says " +
                       fr.name(mm.maps.birth.at(x)));
    std::set<int> image;
    for (HFSet x : sm.D(v).members()) {
      auto it = mm.maps.g[v].find(x);
      if (it == mm.maps.g[v].end()) errs.push_back("residue of " + to_literal(x) + " outside the stocked window");
      else image.insert(it->second);
    }
    std::set<int> dom(c.original.domains[v].begin(), c.original.domains[v].end());
    if (image != dom) errs.push_back("g is not onto D at " + fr.name(v));
  }
  std::size_t tagged = 0;
  for (HFSet x : sm.D(c.order[0]).members()) {
    auto p = x.as_pair();
    if (p && p->first == c.tag) ++tagged;
  }
  for (int v = 0; v < n; ++v)
    for (HFSet x : sm.D(v).members()) {
      auto p = x.as_pair();
      if (p && p->first == c.tag && x != c.package) errs.push_back("tag collision at " + fr.name(v));
    }
  if (tagged != 1) errs.push_back("package missing from the root");
  return errs;
}

MimicCheck mimic_check(const Mimic& mm, const std::vector<Formula>& formulas, Exec exec) {
  MimicCheck out;
  out.map_errors = mimic_map_errors(mm);
  const SetKripkeModel& sm = *mm.model;
  const int n = static_cast<int>(sm.frame.size());

  std::vector<HFSet> elems;
  std::unordered_map<HFSet, int, HFSetHash> index;
  {
    std::set<HFSet> all;
    for (int v = 0; v < n; ++v)
      for (HFSet x : sm.D(v).members()) all.insert(x);
    elems.assign(all.begin(), all.end());
    for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> dom(n);
  std::vector<std::vector<int>> g(n, std::vector<int>(elems.size(), -1));
  for (int v = 0; v < n; ++v)
    for (HFSet x : sm.D(v).members()) {
      dom[v].push_back(index[x]);
      if (auto it = mm.maps.g[v].find(x); it != mm.maps.g[v].end()) g[v][index[x]] = it->second;
    }
  if (!out.map_errors.empty()) return out;

  // one SetForcer per worker thread, shared across atom tables
  const int threads = exec == Exec::Parallel ? omp_get_max_threads() : 1;
  std::vector<std::shared_ptr<SetForcer>> pool;
  std::vector<std::shared_ptr<std::unordered_map<Formula, Formula, FormulaHash>>> images;
  for (int t = 0; t < threads; ++t) {
    pool.push_back(std::make_shared<SetForcer>(mm.model));
    images.push_back(std::make_shared<std::unordered_map<Formula, Formula, FormulaHash>>());
  }
  const Translation& tau = mm.tau;
  AtomFactory factory = [&]() -> AtomFn {
    int t = exec == Exec::Parallel ? omp_get_thread_num() : 0;
    auto fz = pool[t];
    auto img = images[t];
    return [fz, img, &tau, &elems](int node, const Formula& atom, const std::vector<std::string>& vars,
                                   const std::vector<int>& xs) {
      auto it = img->find(atom);
      if (it == img->end()) it = img->emplace(atom, tau.apply_homomorphic(atom)).first;
      SetAssignment a;
      for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = elems[xs[i]];
      return fz->forces(node, it->second, a);
    };
  };
  TableEvaluator target(KripkeShape::make(sm.frame, elems.size(), dom), factory, exec);
  FOForcer source(mm.coded.original, exec);

  for (const Formula& phi : formulas) {
    check_language(phi, Language::FO);
    ++out.formulas;
    auto T = target.table(phi);
    auto S = source.table(phi);
    const std::size_t k = T->vars.size();
    for (int v = 0; v < n; ++v) {
      const auto& d = dom[v];
      std::vector<std::size_t> pos(k, 0);
      std::vector<int> xs(k), ys(k);
      while (true) {
        for (std::size_t i = 0; i < k; ++i) {
          xs[i] = d[pos[i]];
          ys[i] = g[v][xs[i]];
        }
        bool tv = T->at(v, xs), sv = S->at(v, ys);
        ++out.checked;
        if (tv != sv && out.mismatches.size() < 100) {
          EquivRow row{render(phi), v, {}, sv, tv};
          for (std::size_t i = 0; i < k; ++i) row.assignment[T->vars[i]] = to_literal(elems[xs[i]]);
          out.mismatches.push_back(std::move(row));
        }
        std::size_t i = 0;
        while (i < k && ++pos[i] == d.size()) pos[i++] = 0;
        if (i == k) break;
      }
    }
  }
  return out;
}

std::map<std::string, int> signature_of(const FOModel& m) {
  std::map<std::string, int> s;
  for (auto& [name, r] : m.relations) s[name] = r.arity;
  return s;
}

namespace {

std::vector<Formula> atoms_over(const std::map<std::string, int>& arities, const std::vector<std::string>& vars) {
  std::vector<Formula> out{F::bot()};
  for (auto& [name, ar] : arities) {
    if (ar == 0) {
      out.push_back(F::prop(name));
      continue;
    }
    std::vector<std::size_t> pos(ar, 0);
    while (true) {
      std::vector<Term> args;
      for (auto p : pos) args.push_back(V(vars[p]));
      out.push_back(F::pred(name, args));
      std::size_t i = 0;
      while (i < pos.size() && ++pos[i] == vars.size()) pos[i++] = 0;
      if (i == pos.size()) break;
    }
  }
  return out;
}

}  // namespace

std::vector<Formula> enumerate_formulas(const std::map<std::string, int>& arities,
                                        const std::vector<std::string>& vars, int depth) {
  if (depth > kMaxExhaustiveDepth)
    throw BudgetError("exhaustive enumeration is limited to depth " + std::to_string(kMaxExhaustiveDepth));
  std::vector<std::vector<Formula>> level{atoms_over(arities, vars)};
  std::vector<Formula> all = level[0];
  for (int d = 1; d <= depth; ++d) {
    const auto& prev = level[d - 1];
    std::vector<Formula> next;
    std::unordered_set<Formula, FormulaHash> fresh(prev.begin(), prev.end());
    for (const Formula& a : all)
      for (const Formula& b : all) {
        if (!fresh.count(a) && !fresh.count(b)) continue;
        next.push_back(F::conj(a, b));
        next.push_back(F::disj(a, b));
        next.push_back(F::impl(a, b));
      }
    for (const Formula& a : prev)
      for (auto& x : vars) {
        next.push_back(F::exists(x, a));
        next.push_back(F::forall(x, a));
      }
    all.insert(all.end(), next.begin(), next.end());
    level.push_back(std::move(next));
  }
  return all;
}

Formula random_formula(std::mt19937_64& rng, const std::map<std::string, int>& arities,
                       const std::vector<std::string>& vars, int depth) {
  static thread_local std::map<std::pair<std::map<std::string, int>, std::vector<std::string>>, std::vector<Formula>> cache;
  auto& atoms = cache[{arities, vars}];
  if (atoms.empty()) atoms = atoms_over(arities, vars);
  if (depth <= 0) return atoms[std::uniform_int_distribution<std::size_t>(0, atoms.size() - 1)(rng)];
  int op = std::uniform_int_distribution<int>(0, 4)(rng);
  if (op >= 3) {
    const std::string& x = vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
    Formula b = random_formula(rng, arities, vars, depth - 1);
    return op == 3 ? F::exists(x, b) : F::forall(x, b);
  }
  Formula a = random_formula(rng, arities, vars, depth - 1);
  Formula b = random_formula(rng, arities, vars, std::uniform_int_distribution<int>(0, depth - 1)(rng));
  if (rng() & 1) std::swap(a, b);
  return op == 0 ? F::conj(a, b) : op == 1 ? F::disj(a, b) : F::impl(a, b);
}

}  // namespace kripke
