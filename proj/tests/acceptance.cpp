// Acceptance run: one PASS/FAIL line per criterion with its wall time and
// limit. Exits non-zero if any criterion fails or runs over its limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "kripke/axioms.hpp"
#include "kripke/dejongh.hpp"
#include "kripke/mimic.hpp"
#include "kripke/reference.hpp"

using namespace kripke;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (ok) detail << why << "; ";
    ok = false;
  }
};

Formula P(const char* s) { return parse(s, Language::Prop); }

struct Curated {
  const char* text;
  bool valid;
};

// Frozen expected answers: IPC theorems and classical-only principles.
const std::vector<Curated> kCurated = {
    {"p -> p", true},
    {"p -> ~~p", true},
    {"~~~p -> ~p", true},
    {"~~(p | ~p)", true},
    {"~~(~~p -> p)", true},
    {"(p -> q) -> (~q -> ~p)", true},
    {"~(p | q) <-> (~p & ~q)", true},
    {"((p | q) -> r) <-> ((p -> r) & (q -> r))", true},
    {"(p -> (q -> r)) -> ((p -> q) -> (p -> r))", true},
    {"(p & q -> r) <-> (p -> q -> r)", true},
    {"p | ~p", false},
    {"~~p -> p", false},
    {"~p | ~~p", false},
    {"(p -> q) | (q -> p)", false},
    {"((p -> q) -> p) -> p", false},
    {"~(p & q) -> ~p | ~q", false},
    {"(~~p -> p) -> p | ~p", false},
    {"(p -> q) -> ~p | q", false},
    {"(~p -> q | r) -> (~p -> q) | (~p -> r)", false},
    {"p | (p -> q | ~q)", false},
};

Outcome criterion1() {
  Outcome o;
  for (auto& c : kCurated) {
    Formula f = P(c.text);
    Decision d = ipc_decide(f, 6);
    if (d.valid != c.valid) o.fail(std::string("wrong answer for ") + c.text);
    if (!d.valid) {
      if (!d.countermodel || force_prop(*d.countermodel, d.refuting_node, f))
        o.fail(std::string("countermodel does not refute ") + c.text);
    }
  }
  o.detail << kCurated.size() << " formulas at bound 6";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(2002);
  const std::vector<std::string> letters{"p", "q"};
  std::size_t trials = 0, violations = 0;
  auto pick_pair = [&](const Frame& fr, int& v, int& w) {
    v = static_cast<int>(fixtures::uniform(rng, fr.size()));
    auto up = fr.up_list(v);
    w = up[fixtures::uniform(rng, up.size())];
  };
  for (int i = 0; i < 250; ++i, ++trials) {  // frames: validity at a node persists upward
    Frame fr = fixtures::random_frame(rng, 4);
    Formula f = fixtures::random_prop_formula(rng, letters, 4);
    int v, w;
    pick_pair(fr, v, w);
    bool at_v = true, at_w = true;
    for (auto& val : enumerate_valuations(fr, letters)) {
      NodeSet s = forcing_set(PropModel{fr, val}, f);
      at_v = at_v && (s >> v & 1);
      at_w = at_w && (s >> w & 1);
    }
    if (at_v && !at_w) ++violations;
  }
  for (int i = 0; i < 250; ++i, ++trials) {
    PropModel m = fixtures::random_prop_model(rng, 5, letters);
    Formula f = fixtures::random_prop_formula(rng, letters, 5);
    int v, w;
    pick_pair(m.frame, v, w);
    if (force_prop(m, v, f) && !force_prop(m, w, f)) ++violations;
  }
  for (int i = 0; i < 250; ++i, ++trials) {
    bool eq = i % 2;
    FOModel m = fixtures::random_fo_model(rng, 4, eq);
    int fresh = 0;
    Formula f = fixtures::random_fo_formula(rng, {"x"}, 4, eq, fresh);
    int v, w;
    pick_pair(m.frame, v, w);
    const auto& d = m.domains[v];
    ElemAssignment a{{"x", d[fixtures::uniform(rng, d.size())]}};
    FOForcer fz(m);
    if (fz.forces(v, f, a) && !fz.forces(w, f, a)) ++violations;
  }
  for (int i = 0; i < 250; ++i, ++trials) {
    SetKripkeModel m = fixtures::random_set_model(rng, 3);
    int fresh = 0;
    Formula f = fixtures::random_set_formula(rng, 3, fresh);
    int v, w;
    pick_pair(m.frame, v, w);
    SetForcer fz(m);
    if (fz.forces(v, f) && !fz.forces(w, f)) ++violations;
  }
  if (violations) o.fail(std::to_string(violations) + " violations");
  o.detail << trials << " trials, " << violations << " violations";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::mt19937_64 rng(3003);
  std::vector<SetKripkeModel> models{fixtures::vn_chain({3, 4}), fixtures::exp_chain(3),
                                     fixtures::constant_model(Frame::antichain(2), full_universe(3)),
                                     fixtures::random_set_model(rng, 3), fixtures::random_set_model(rng, 3)};
  std::size_t rows = 0;
  for (int i = 0; i < 200; ++i) {
    int fresh = 0;
    Formula f = fixtures::random_delta0(rng, {"a", "b"}, 4, fresh);
    for (auto& m : models) {
      const auto& top = m.D(static_cast<int>(m.frame.size()) - 1).members();
      SetAssignment params{{"a", top[fixtures::uniform(rng, top.size())]},
                           {"b", top[fixtures::uniform(rng, top.size())]}};
      auto rep = check_local_evaluation(m, f, params);
      rows += rep.rows.size();
      if (!rep.ok()) o.fail("locality mismatch for " + render(f));
    }
  }
  o.detail << "200 formulas x 5 models, " << rows << " node comparisons";
  return o;
}

Outcome criterion4() {
  Outcome o;
  const std::set<std::uint64_t> probe{0, 1, 2, 3};
  std::size_t codes = 0;
  for (const Frame& fr : rooted_frames_up_to(4)) {
    ValuationEnumerator en(fr, {"0", "1", "2"});
    for (std::uint64_t i = 0; i < en.size(); ++i, ++codes) {
      std::vector<NodeSet> sets;
      en.fill(i, sets);
      MonotoneCode f(fr.size());
      for (std::uint64_t b = 0; b < 3; ++b)
        for (std::size_t v = 0; v < fr.size(); ++v)
          if (sets[b] >> v & 1) f[v].insert(b);
      SetForcer fz(realize_code(fr, f));
      for (int v = 0; v < static_cast<int>(fr.size()); ++v)
        if (forced_buttons(fz, v, probe) != f[v]) o.fail("forced buttons differ from the code");
    }
  }
  o.detail << codes << " (frame, code) pairs";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::size_t checked = 0, done = 0;
  for (auto& c : kCurated) {
    if (c.valid) continue;
    Formula f = P(c.text);
    Decision d = ipc_decide(f, 6);
    if (d.valid || !d.countermodel) {
      o.fail(std::string("no countermodel for ") + c.text);
      continue;
    }
    auto rep = dejongh_prop_check(*d.countermodel, f);
    checked += rep.checked;
    ++done;
    if (!rep.mismatches.empty()) o.fail(std::string("subformula table mismatch for ") + c.text);
    if (rep.failing_nodes.empty() || !rep.target_fails_there)
      o.fail(std::string("translation not refuted at the failing node for ") + c.text);
  }
  if (done != 10) o.fail("expected 10 non-theorems");
  o.detail << done << " non-theorems, " << checked << " table comparisons";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::size_t checked = 0;
  for (auto name : {"CD", "DNS", "DecidableP"}) {
    auto rep = dejongh_relative_check(iqc_countermodel(name), iqc_schema(name));
    checked += rep.checked;
    if (!rep.ok() || rep.failing_nodes.empty()) o.fail(std::string(name) + " failed");
  }
  o.detail << "CD, DNS, DecidableP; " << checked << " comparisons";
  return o;
}

std::vector<FOModel> mimic_battery() {
  std::vector<FOModel> out;
  for (auto name : {"CD", "DNS", "DecidableP"}) out.push_back(iqc_countermodel(name));
  FOModel fork;
  fork.frame = Frame::from_hasse({"r", "a", "b"}, {{"r", "a"}, {"r", "b"}});
  fork.domains = {{0}, {0, 1}, {0, 1}};
  fork.relation("P", 1).at = {{}, {{1}}, {{0}}};
  out.push_back(fork);
  std::mt19937_64 rng(7007);
  while (out.size() < 8) {
    FOModel m = fixtures::random_fo_model(rng, 3, false, true);
    m.relations.erase("R");
    out.push_back(m);
  }
  return out;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(7008);
  std::size_t formulas = 0, checked = 0;
  auto battery = mimic_battery();
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const FOModel& m = battery[i];
    Mimic mm = mimic_build(m);
    auto sig = signature_of(m);
    auto fs = enumerate_formulas(sig, {"x", "y"}, 2);
    std::size_t nrand = 100 / battery.size() + (i < 100 % battery.size() ? 1 : 0);
    for (std::size_t k = 0; k < nrand; ++k) fs.push_back(random_formula(rng, sig, {"x", "y"}, 3));
    auto r = mimic_check(mm, fs);
    formulas += r.formulas;
    checked += r.checked;
    if (!r.ok()) o.fail("mimic mismatch on battery model " + std::to_string(i));
  }
  o.detail << battery.size() << " models, " << formulas << " formulas (100 random depth-3), " << checked
           << " comparisons";
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto two = fixtures::exp_chain(2);
  auto w = exp_failure_witness(two);
  if (!w || w->lower != 0 || !w->exp_refuted || !is_function(w->g, w->a, w->b) || two.D(0).contains(w->g))
    o.fail("2-chain witness missing or wrong");
  if (force_set(two, 0, axiom_exp())) o.fail("bottom forces Exp");
  auto four = fixtures::exp_chain(4);
  for (int v = 0; v < 3; ++v) {
    auto wv = exp_failure_witness_at(four, v);
    if (!wv || !wv->exp_refuted) o.fail("length-4 chain: no failure at node " + std::to_string(v));
  }
  o.detail << "2-chain witness g = " << (w ? to_literal(w->g) : "-") << "; length-4 chain fails at nodes 0..2";
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(9009);
  Universe v4 = full_universe(4);
  Formula ac = axiom_ac();
  // instance at a: antecedent(a) -> exists b matrix(a, b)
  Formula inst = ac.body();
  Formula matrix = inst.rhs().body();
  for (int i = 0; i < 20; ++i) {
    HFSet a = fixtures::random_disjoint_family(rng, v4);
    HFSet extra = v4.members()[fixtures::uniform(rng, v4.size())];
    Universe bottom = v4.with(std::vector<HFSet>{a});
    Universe top = bottom.with(std::vector<HFSet>{HFSet::make({a, extra})});
    auto m = build_classical_model(Frame::chain(2), {bottom, top});
    SetForcer fz(m);
    for (int v = 0; v < 2; ++v) {
      if (!fz.forces(v, inst, {{"a", a}})) o.fail("instance not forced for " + to_literal(a));
      auto b = fz.witness(v, "b", matrix, {{"a", a}});
      if (!b) {
        o.fail("no witness for " + to_literal(a));
        continue;
      }
      for (HFSet x : a.elements()) {
        int hits = 0;
        for (HFSet z : b->elements()) hits += x.contains(z);
        if (hits != 1) o.fail("witness is not a choice set for " + to_literal(a));
      }
    }
  }
  o.detail << "20 families, witnesses verified classically";
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::mt19937_64 rng(1010);
  std::vector<SetKripkeModel> models{fixtures::vn_chain({3, 4}), fixtures::exp_chain(2), fixtures::exp_chain(4),
                                     fixtures::constant_model(Frame::antichain(3), full_universe(3))};
  // domains with fewer than 3 sets cannot tell the two sides apart; skip them
  std::size_t skipped = 0;
  while (models.size() < 12) {
    auto m = fixtures::random_set_model(rng, 3);
    if (check_equality_collapse(m).conclusive)
      models.push_back(std::move(m));
    else
      ++skipped;
  }
  for (auto& m : models) {
    auto rep = check_equality_collapse(m);
    if (!rep.conclusive || !rep.phi_everywhere()) o.fail("a set model does not force the collapse formula");
  }
  FOModel two = iqc_countermodel("TwoElementEq");
  if (force_fo(two, two.frame.roots().front(), collapse_formula())) o.fail("TwoElementEq forces it");
  o.detail << models.size() << " set models force it (" << skipped
           << " random models with a domain under 3 sets skipped); TwoElementEq refutes it";
  return o;
}

Outcome criterion11() {
  Outcome o;
  std::mt19937_64 rng(1111);
  const std::vector<std::string> letters{"p", "q"};
  std::size_t mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    Frame fr = fixtures::random_frame(rng, 4);
    Formula f = fixtures::random_prop_formula(rng, letters, 4);
    bool ref = true;
    for (auto& val : enumerate_valuations(fr, letters))
      for (int v = 0; v < static_cast<int>(fr.size()); ++v) ref = ref && reference::force_prop(PropModel{fr, val}, v, f);
    mismatches += frame_validates(fr, f, Exec::Serial) != ref;
    mismatches += frame_validates(fr, f, Exec::Parallel) != ref;
  }
  for (int i = 0; i < 500; ++i) {
    PropModel m = fixtures::random_prop_model(rng, 5, letters);
    Formula f = fixtures::random_prop_formula(rng, letters, 5);
    NodeSet s = forcing_set(m, f);
    for (int v = 0; v < static_cast<int>(m.frame.size()); ++v)
      mismatches += ((s >> v & 1) != 0) != reference::force_prop(m, v, f);
  }
  for (int i = 0; i < 500; ++i) {
    bool eq = i % 2;
    FOModel m = fixtures::random_fo_model(rng, 4, eq);
    int fresh = 0;
    Formula f = fixtures::random_fo_formula(rng, {"x"}, 4, eq, fresh);
    FOForcer serial(m, Exec::Serial), par(m, Exec::Parallel);
    for (int v = 0; v < static_cast<int>(m.frame.size()); ++v)
      for (int e : m.domains[v]) {
        bool ref = reference::force_fo(m, v, f, {{"x", e}});
        mismatches += serial.forces(v, f, {{"x", e}}) != ref;
        mismatches += par.forces(v, f, {{"x", e}}) != ref;
      }
  }
  for (int i = 0; i < 500; ++i) {
    SetKripkeModel m = fixtures::random_set_model(rng, 3);
    int fresh = 0;
    Formula f = fixtures::random_set_formula(rng, 3, fresh);
    SetForcer fz(m);
    for (int v = 0; v < static_cast<int>(m.frame.size()); ++v) mismatches += fz.forces(v, f) != reference::force_set(m, v, f);
  }
  if (mismatches) o.fail(std::to_string(mismatches) + " disagreements");
  o.detail << "4 kinds x 500 pairs, " << mismatches << " disagreements";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit;  // seconds; 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> all{
      {1, "IPC decision on curated formulas", 60, criterion1},
      {2, "persistence over all model kinds", 60, criterion2},
      {3, "Delta0 locality", 60, criterion3},
      {4, "button realization of monotone codes", 120, criterion4},
      {5, "propositional translation equivalence", 120, criterion5},
      {6, "relative translation equivalence", 120, criterion6},
      {7, "mimicking set models", 300, criterion7},
      {8, "Exp failure", 30, criterion8},
      {9, "AC instances", 30, criterion9},
      {10, "equality collapse", 10, criterion10},
      {11, "cross-oracle agreement", 0, criterion11},
  };
  int failed = 0;
  for (auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit == 0 || s < c.limit;
    bool pass = o.ok && in_time;
    failed += !pass;
    std::string limit = c.limit == 0 ? "no limit" : "limit " + std::to_string(static_cast<int>(c.limit)) + " s";
    std::printf("%s criterion %d: %s (%.2f s, %s) %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, s, limit.c_str(),
                o.detail.str().c_str(), in_time ? "" : " [over time limit]");
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
