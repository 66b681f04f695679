#include <gtest/gtest.h>

#include "kripke/axioms.hpp"
#include "kripke/error.hpp"
#include "kripke/syntax.hpp"

using namespace kripke;

TEST(Parse, Shapes) {
  Formula f = parse("p -> p", Language::Prop);
  EXPECT_EQ(f, Formula::impl(Formula::prop("p"), Formula::prop("p")));
  Formula b = parse("forall x in a (x in b)", Language::Set);
  EXPECT_EQ(b.op(), Op::BForall);
  EXPECT_EQ(b.body(), Formula::mem(Term::var("x"), Term::var("b")));
  Formula q = parse("(exists x P(x)) -> Q", Language::FO);
  EXPECT_EQ(q, Formula::impl(Formula::exists("x", Formula::pred("P", {Term::var("x")})), Formula::prop("Q")));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("p ->", Language::Prop), ParseError);
  try {
    parse("p & & q", Language::Prop);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse("forall x P(x)", Language::Prop), LanguageError);
  EXPECT_THROW(parse("x = y", Language::FO), LanguageError);
  EXPECT_NO_THROW(parse("x = y", Language::FOEq));
}

TEST(Parse, BoundedBodyIsNotApplication) {
  Formula f = parse("exists z in y (y = z)", Language::Set);
  EXPECT_EQ(f.op(), Op::BExists);
  EXPECT_EQ(f.bound(), Term::var("y"));
}

TEST(Render, Examples) {
  EXPECT_EQ(render(Formula::bot()), "false");
  EXPECT_EQ(render(Formula::mem(Term::var("a"), Term::var("b"))), "a in b");
  EXPECT_EQ(render(desugar(parse("forall x in a (x in b)", Language::Set))), "forall x (x in a -> x in b)");
}

TEST(Render, RoundTrip) {
  for (const char* s : {"p & q | r -> ~s", "forall x (P(x) -> exists y R(x, y))",
                        "forall a exists y forall x (x in y <-> x = a)", "exists x in pair(a, {}) (x = succ(a))",
                        "~~p", "(p -> q) -> r"}) {
    Formula f = parse_any(s);
    EXPECT_EQ(parse_any(render(f)), f) << s;
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(parse("forall x in a (x in b)", Language::Set)).tag, FormulaClass::Tag::Delta0);
  FormulaClass s1 = classify(parse("exists x (x = a)", Language::Set));
  EXPECT_EQ(s1.tag, FormulaClass::Tag::SigmaN);
  EXPECT_EQ(s1.n, 1);
  EXPECT_EQ(classify(axiom_ac()).str(), "Sigma3");
}

TEST(Relativize, Clauses) {
  EXPECT_EQ(render(relativize_E(parse("exists x P(x)", Language::FO))), "exists x (E(x) & P(x))");
  EXPECT_EQ(render(relativize_E(parse("forall x P(x)", Language::FO))), "forall x (E(x) -> P(x))");
  Formula p = parse("p -> p", Language::FO);
  EXPECT_EQ(relativize_E(p), p);
  EXPECT_THROW(relativize_E(parse("exists x E(x)", Language::FO)), LanguageError);
}

TEST(FunctionElimination, Examples) {
  Signature sig;
  sig.relations = {{"P", 1}};
  sig.constants = {"c"};
  sig.functions = {{"f", 1}, {"g", 1}};
  Formula pc = parse("P(c)", Language::FO, &sig);
  EXPECT_EQ(eliminate_function_symbols(sig, pc), pc);
  Formula one = eliminate_function_symbols(sig, parse("P(f(c))", Language::FO, &sig));
  EXPECT_EQ(one.op(), Op::Exists);
  EXPECT_EQ(predicate_arities(one).at("R_f"), 2);
  Formula two = eliminate_function_symbols(sig, parse("P(f(g(c)))", Language::FO, &sig));
  auto ar = predicate_arities(two);
  EXPECT_TRUE(ar.count("R_f") && ar.count("R_g"));
  EXPECT_FALSE(ar.count("f"));
}

TEST(Substitution, CaptureAvoiding) {
  Formula f = parse("exists y (x in y)", Language::Set);
  Formula g = substitute(f, {{"x", Term::var("y")}});
  EXPECT_EQ(free_vars(g), std::vector<std::string>{"y"});
  EXPECT_TRUE(alpha_equivalent(f, parse("exists z (x in z)", Language::Set)));
}

TEST(Json, FormulaRoundTrip) {
  Formula f = parse("forall x in a exists y (y = pair(x, {}))", Language::Set);
  EXPECT_EQ(formula_from_json(to_json(f)), f);
}
