#include <gtest/gtest.h>

#include "kripke/axioms.hpp"
#include "kripke/coding.hpp"
#include "kripke/error.hpp"
#include "kripke/hf.hpp"
#include "kripke/universe.hpp"

using namespace kripke;

TEST(HF, OrdinalsAndCanonicalForm) {
  EXPECT_EQ(ordinal(0), HFSet());
  EXPECT_EQ(ordinal(1), singleton(HFSet()));
  EXPECT_EQ(HFSet::make({HFSet(), HFSet()}), singleton(HFSet()));
  EXPECT_EQ(unordered_pair(ordinal(1), ordinal(0)), ordinal(2));
  EXPECT_EQ(ordinal(3).as_natural(), 3u);
  EXPECT_FALSE(singleton(ordinal(1)).as_natural());
  EXPECT_TRUE(ordinal(5).is_ordinal());
}

TEST(HF, RankAndTc) {
  HFSet x = singleton(singleton(HFSet()));
  EXPECT_EQ(rank(x), 2u);
  auto t = tc(x);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_NE(std::find(t.begin(), t.end(), HFSet()), t.end());
  EXPECT_NE(std::find(t.begin(), t.end(), singleton(HFSet())), t.end());
  EXPECT_EQ(tc(ordinal(3)).size(), 3u);
}

TEST(HF, PairsAndLiterals) {
  HFSet p = kpair(ordinal(1), ordinal(2));
  auto ab = p.as_pair();
  ASSERT_TRUE(ab);
  EXPECT_EQ(ab->first, ordinal(1));
  EXPECT_EQ(ab->second, ordinal(2));
  for (HFSet x : {HFSet(), ordinal(4), p, singleton(p)}) EXPECT_EQ(parse_hf_literal(to_literal(x)), x);
  EXPECT_EQ(parse_hf_literal("{{},{{}}}"), ordinal(2));
  EXPECT_EQ(parse_hf_literal("pair(ord(1),ord(2))"), p);
  EXPECT_THROW(parse_hf_literal("{{}"), ParseError);
}

TEST(Universe, Closure) {
  HFSet e = singleton(HFSet());
  Universe u = Universe::closure(std::span<const HFSet>(&e, 1));
  EXPECT_EQ(u.size(), 2u);
  EXPECT_TRUE(u.is_transitive());

  Universe pu = universe_close(std::span<const HFSet>(&e, 1), ClosureOps{.pairing = true}, 2);
  EXPECT_TRUE(pu.contains(singleton(e)));
  EXPECT_TRUE(pu.contains(HFSet()));
  EXPECT_TRUE(pu.is_transitive());
}

TEST(Universe, FullLevels) {
  Universe v3 = full_universe(3);
  EXPECT_EQ(v3.size(), 4u);
  EXPECT_EQ(full_universe(4).size(), 16u);
  EXPECT_EQ(full_universe(5).size(), 65536u);
  EXPECT_THROW(full_universe(5, 1000), BudgetError);
  HFSet e = singleton(HFSet());
  Universe p4 = universe_close(std::span<const HFSet>(&e, 1), ClosureOps{.power_set = true}, 4);
  EXPECT_TRUE(p4.is_transitive());
  Universe v4 = full_universe(4);
  for (HFSet x : v4.members()) EXPECT_TRUE(p4.contains(x));
  for (HFSet x : p4.members()) {
    if (x.rank() + 1 > 4) continue;
    auto elems = x.elements();
    std::vector<HFSet> subs;
    for (std::size_t m = 0; m < (std::size_t{1} << elems.size()); ++m) {
      std::vector<HFSet> s;
      for (std::size_t k = 0; k < elems.size(); ++k)
        if (m >> k & 1) s.push_back(elems[k]);
      subs.push_back(HFSet::make(s));
    }
    EXPECT_TRUE(p4.contains(HFSet::make(subs)));
  }
  EXPECT_THROW(universe_close(std::span<const HFSet>(&e, 1), ClosureOps{.power_set = true}, 5, 100), BudgetError);
}

TEST(Universe, EvalClassical) {
  Universe v3 = full_universe(3);
  EXPECT_TRUE(eval_classical(v3, parse("exists y forall x in y false", Language::Set)));
  EXPECT_TRUE(eval_classical(v3, parse("forall x in ord(2) (x in ord(2))", Language::Set)));
  // no function 2 -> 2 has rank below 3, so z = {} serves: the instance holds
  Formula exp22 = Formula::exists("z", Formula::forall("f", Formula::iff(
      Formula::mem(Term::var("f"), Term::var("z")), fun_formula(Term::var("f"), Term::lit(ordinal(2)), Term::lit(ordinal(2))))));
  EXPECT_TRUE(eval_classical(v3, exp22));
  // the four functions present, the set of them absent
  std::vector<HFSet> fns;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      fns.push_back(HFSet::make({kpair(ordinal(0), ordinal(a)), kpair(ordinal(1), ordinal(b))}));
  fns.push_back(ordinal(2));
  EXPECT_FALSE(eval_classical(Universe::closure(fns), exp22));
  EXPECT_THROW(eval_classical(v3, parse("x in x", Language::Set)), EvalError);
}

TEST(Coding, SequenceCodes) {
  EXPECT_TRUE(decode_seq(code_seq({})).empty());
  EXPECT_EQ(code_seq({0, 0}), 3);
  EXPECT_EQ(code_seq({0, 1}), 12);
  EXPECT_EQ(code_seq({1, 1}), 25);
  EXPECT_EQ(code_seq({1, 0, 1}), 74);
  auto d = decode_seq(code_seq({0, 3}));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], 0);
  EXPECT_EQ(d[1], 3);
  for (std::uint64_t z = 0; z < 200; ++z) {
    auto [a, b] = cantor_unpair(z);
    EXPECT_EQ(cantor_pair(a, b), z);
  }
}

TEST(Coding, GodelRoundTrip) {
  for (const char* s : {"p -> p", "forall x (P(x) | q)", "forall x in a exists y (y = {x})"}) {
    Formula f = parse_any(s);
    EXPECT_EQ(formula_from_godel(godel(f)), f) << s;
  }
  EXPECT_NE(godel(parse_any("p")), godel(parse_any("q")));
}
