#include <gtest/gtest.h>

#include "kripke/error.hpp"
#include "kripke/fo.hpp"
#include "kripke/mimic.hpp"
#include "kripke/reference.hpp"

using namespace kripke;

namespace {

Formula FO(const char* s) { return parse(s, Language::FO); }

FOModel growing_chain() {
  FOModel m;
  m.frame = Frame::chain(2);
  m.domains = {{0}, {0, 1}};
  m.relation("P", 1).at = {{}, {{1}}};
  return m;
}

}  // namespace

TEST(FOForcing, Examples) {
  FOModel m = growing_chain();
  // 0 never gets P and 1 has P wherever it exists, so decidability holds here
  EXPECT_TRUE(force_fo(m, 0, FO("forall x (P(x) | ~P(x))")));
  EXPECT_TRUE(reference::force_fo(m, 0, FO("forall x (P(x) | ~P(x))")));
  // it fails once an old element gains P later
  FOModel late = growing_chain();
  late.relation("P", 1).at = {{}, {{0}}};
  EXPECT_FALSE(force_fo(late, 0, FO("forall x (P(x) | ~P(x))")));
  for (int v = 0; v < 2; ++v) EXPECT_TRUE(force_fo(m, v, FO("forall x (P(x) -> P(x))")));

  FOModel one;
  one.frame = Frame::chain(1);
  one.domains = {{0, 1}};
  one.relation("P", 1).at = {{{0}}};
  one.relation("q", 0).at = {{}};
  EXPECT_TRUE(force_fo(one, 0, FO("(forall x (P(x) | q)) -> (forall x P(x)) | q")));
}

TEST(FOForcing, Errors) {
  FOModel m = growing_chain();
  EXPECT_THROW(force_fo(m, 0, FO("P(x)")), EvalError);
  EXPECT_THROW(force_fo(m, 0, FO("P(x)"), {{"x", 1}}), EvalError);  // 1 is not in D_0
  EXPECT_THROW(force_fo(m, 0, parse("forall x (x = x)", Language::FOEq)), EvalError);
  EXPECT_TRUE(force_fo(m, 1, FO("P(x)"), {{"x", 1}}));
}

TEST(FOModelCheck, Violations) {
  EXPECT_TRUE(check_fo_model(growing_chain()).empty());
  FOModel shrink = growing_chain();
  shrink.relation("P", 1).at = {{{0}}, {}};
  auto v = check_fo_model(shrink);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, FOViolation::Kind::RelationMonotone);

  FOModel eq;
  eq.frame = Frame::chain(1);
  eq.domains = {{0, 1, 2}};
  eq.congruence = std::vector<std::set<std::pair<int, int>>>{
      {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 0}, {1, 2}, {2, 1}}};  // 0~1~2 but not 0~2
  auto ev = check_fo_model(eq);
  ASSERT_FALSE(ev.empty());
  EXPECT_EQ(ev[0].kind, FOViolation::Kind::CongruenceNotEquivalence);
}

TEST(FOPersistence, RandomFormulasHold) {
  std::mt19937_64 rng(7);
  for (auto name : {"CD", "DNS", "DecidableP"}) {
    FOModel m = iqc_countermodel(name);
    for (int i = 0; i < 30; ++i) {
      Formula f = random_formula(rng, signature_of(m), {"x", "y"}, 3);
      EXPECT_FALSE(check_fo_persistence(m, f)) << render(f);
    }
  }
}

TEST(PadDomains, Examples) {
  FOModel m = growing_chain();
  PadResult same = pad_domains(m, 0);
  EXPECT_EQ(same.model.domains, m.domains);
  for (auto& [a, b] : same.origin) EXPECT_EQ(a, b);

  FOModel one;
  one.frame = Frame::chain(1);
  one.domains = {{0}};
  one.relation("P", 1).at = {{{0}}};
  PadResult p = pad_domains(one, 2);
  ASSERT_EQ(p.model.domains[0].size(), 3u);
  for (int e : p.model.domains[0]) EXPECT_TRUE(p.model.relations.at("P").holds(0, {e}));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    Formula f = random_formula(rng, signature_of(one), {"x", "y"}, 3);
    if (!free_vars(f).empty()) continue;
    EXPECT_EQ(force_fo(one, 0, f), force_fo(p.model, 0, f)) << render(f);
  }
  FOModel eq = iqc_countermodel("TwoElementEq");
  EXPECT_THROW(pad_domains(eq, 1), ModelError);
}

TEST(Countermodels, RefuteTheirSchemas) {
  for (auto& name : iqc_countermodel_names()) {
    FOModel m = iqc_countermodel(name);
    Formula s = iqc_schema(name);
    int root = m.frame.roots()[0];
    EXPECT_FALSE(force_fo(m, root, s)) << name;
    EXPECT_FALSE(reference::force_fo(m, root, s)) << name;
  }
  EXPECT_THROW(iqc_countermodel("Nope"), Error);
  FOModel cd = iqc_countermodel("CD");
  EXPECT_EQ(cd.frame.size(), 2u);
  EXPECT_EQ(iqc_countermodel("TwoElementEq").frame.size(), 1u);
}

TEST(FOJson, RoundTrip) {
  for (auto& name : iqc_countermodel_names()) {
    FOModel m = iqc_countermodel(name);
    FOModel r = fo_model_from_json(fo_model_to_json(m));
    EXPECT_EQ(r.domains, m.domains);
    EXPECT_EQ(fo_model_to_json(r), fo_model_to_json(m));
  }
}

TEST(FOForcer, SerialAndParallelAgree) {
  FOModel m = pad_domains(iqc_countermodel("CD"), 3).model;
  std::mt19937_64 rng(11);
  FOForcer par(m, Exec::Parallel), ser(m, Exec::Serial);
  for (int i = 0; i < 40; ++i) {
    Formula f = random_formula(rng, signature_of(m), {"x", "y"}, 3);
    auto a = par.table(f), b = ser.table(f);
    EXPECT_EQ(a->bits, b->bits);
  }
}
