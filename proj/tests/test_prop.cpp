#include <gtest/gtest.h>

#include "kripke/error.hpp"
#include "kripke/prop.hpp"
#include "kripke/reference.hpp"

using namespace kripke;

namespace {

PropModel chain2_p_top() {
  PropModel m{Frame::chain(2), {}};
  m.valuation.sets["p"] = 0b10;
  return m;
}

Formula P(const char* s) { return parse(s, Language::Prop); }

}  // namespace

TEST(PropForcing, Clauses) {
  PropModel m = chain2_p_top();
  EXPECT_FALSE(force_prop(m, 0, P("p | ~p")));
  EXPECT_TRUE(force_prop(m, 1, P("p | ~p")));
  EXPECT_FALSE(force_prop(m, 0, P("~p")));
  EXPECT_TRUE(force_prop(m, 0, P("~~p")));
  for (int v = 0; v < 2; ++v) {
    EXPECT_TRUE(force_prop(m, v, P("p -> p")));
    EXPECT_FALSE(force_prop(m, v, Formula::bot()));
  }
  EXPECT_THROW(force_prop(m, 0, parse("forall x P(x)", Language::FO)), LanguageError);
}

TEST(PropForcing, Persistence) {
  PropModel m{Frame::chain(2), {}};
  for (auto& v : enumerate_valuations(m.frame, {"p", "q"})) {
    m.valuation = v;
    EXPECT_FALSE(check_persistence(m, P("p | q")));
  }
  PropModel bad{Frame::chain(2), {}};
  bad.valuation.sets["p"] = 0b01;  // not up-closed
  auto ce = check_persistence(bad, P("p"));
  ASSERT_TRUE(ce);
  EXPECT_EQ(ce->lower, 0);
  EXPECT_EQ(ce->upper, 1);
  PropModel one{Frame::chain(1), {}};
  EXPECT_FALSE(check_persistence(one, P("((p -> q) -> p) -> p")));
}

TEST(FrameValidity, Examples) {
  EXPECT_TRUE(frame_validates(Frame::chain(1), P("p | ~p")));
  EXPECT_FALSE(frame_validates(Frame::chain(2), P("p | ~p")));
  for (auto& fr : rooted_frames_up_to(4)) EXPECT_TRUE(frame_validates(fr, P("~(p & ~p)")));
  // Dummett holds on chains, fails on the fork
  EXPECT_TRUE(frame_validates(Frame::chain(3), P("(p -> q) | (q -> p)")));
  EXPECT_FALSE(frame_validates(Frame::from_hasse({"r", "a", "b"}, {{"r", "a"}, {"r", "b"}}), P("(p -> q) | (q -> p)")));
  EXPECT_EQ(frame_validates(Frame::chain(3), P("(p -> q) | (q -> p)"), Exec::Serial),
            frame_validates(Frame::chain(3), P("(p -> q) | (q -> p)"), Exec::Parallel));
}

TEST(Decide, Examples) {
  Decision d = ipc_decide(P("~~p -> p"), 6);
  EXPECT_FALSE(d.valid);
  ASSERT_TRUE(d.countermodel);
  EXPECT_EQ(d.countermodel->frame.size(), 2u);
  EXPECT_FALSE(force_prop(*d.countermodel, d.refuting_node, P("~~p -> p")));
  Decision peirce = ipc_decide(P("((p -> q) -> p) -> p"), 6);
  ASSERT_TRUE(peirce.countermodel);
  EXPECT_EQ(peirce.countermodel->frame.size(), 2u);
  EXPECT_TRUE(ipc_decide(P("p -> (q -> p)"), 5).valid);
  // a classical non-tautology needs only one node
  Decision one = ipc_decide(P("p"), 6);
  ASSERT_TRUE(one.countermodel);
  EXPECT_EQ(one.countermodel->frame.size(), 1u);
}

TEST(Decide, ClassicalShortcutAgrees) {
  EXPECT_TRUE(classical_tautology(P("p | ~p")));
  EXPECT_FALSE(classical_tautology(P("p -> q")));
}

TEST(PropJson, RoundTrip) {
  PropModel m = chain2_p_top();
  PropModel r = prop_model_from_json(prop_model_to_json(m));
  EXPECT_EQ(r.frame, m.frame);
  EXPECT_EQ(r.valuation, m.valuation);
  auto j = prop_model_to_json(m);
  j["valuation"]["p"] = {m.frame.name(0)};  // not up-closed
  EXPECT_THROW(prop_model_from_json(j), ModelError);
}

TEST(PropReference, AgreesOnAllSmallModels) {
  std::vector<Formula> fs{P("p | ~p"), P("(p -> q) | (q -> p)"), P("~~p -> p"), P("((p -> q) -> p) -> p"),
                          P("(~p -> q | r) -> (~p -> q) | (~p -> r)")};
  for (auto& fr : rooted_frames_up_to(3))
    for (auto& f : fs) {
      auto ls = letters(f);
      for (auto& v : enumerate_valuations(fr, ls)) {
        PropModel m{fr, v};
        NodeSet s = forcing_set(m, f);
        for (std::size_t n = 0; n < fr.size(); ++n)
          EXPECT_EQ(static_cast<bool>(s >> n & 1), reference::force_prop(m, static_cast<int>(n), f));
      }
    }
}
