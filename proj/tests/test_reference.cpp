#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "kripke/reference.hpp"

using namespace kripke;

namespace {

const std::vector<std::string> kLetters{"p", "q"};

bool reference_frame_validates(const Frame& fr, const Formula& f) {
  for (auto& val : enumerate_valuations(fr, kLetters)) {
    PropModel m{fr, val};
    for (int v = 0; v < static_cast<int>(fr.size()); ++v)
      if (!reference::force_prop(m, v, f)) return false;
  }
  return true;
}

}  // namespace

TEST(CrossOracle, Frames) {
  int seen[2] = {0, 0};
  std::mt19937_64 rng(101);
  for (int i = 0; i < 150; ++i) {
    Frame fr = fixtures::random_frame(rng, 4);
    Formula f = fixtures::random_prop_formula(rng, kLetters, 4);
    bool ref = reference_frame_validates(fr, f);
    ++seen[ref];
    EXPECT_EQ(frame_validates(fr, f, Exec::Serial), ref) << render(f);
    EXPECT_EQ(frame_validates(fr, f, Exec::Parallel), ref) << render(f);
  }
  EXPECT_GT(seen[0], 0);
  EXPECT_GT(seen[1], 0);
}

TEST(CrossOracle, PropModels) {
  int seen[2] = {0, 0};
  std::mt19937_64 rng(102);
  for (int i = 0; i < 300; ++i) {
    PropModel m = fixtures::random_prop_model(rng, 5, kLetters);
    Formula f = fixtures::random_prop_formula(rng, kLetters, 5);
    NodeSet s = forcing_set(m, f);
    for (int v = 0; v < static_cast<int>(m.frame.size()); ++v) {
      bool ref = reference::force_prop(m, v, f);
      ++seen[ref];
      EXPECT_EQ((s >> v & 1) != 0, ref) << render(f);
    }
  }
  EXPECT_GT(seen[0], 0);
  EXPECT_GT(seen[1], 0);
}

TEST(CrossOracle, FOModels) {
  int seen[2] = {0, 0};
  std::mt19937_64 rng(103);
  for (int i = 0; i < 300; ++i) {
    bool eq = i % 2;
    FOModel m = fixtures::random_fo_model(rng, 4, eq);
    ASSERT_NO_THROW(require_valid(m));
    int fresh = 0;
    Formula f = fixtures::random_fo_formula(rng, {"x"}, 4, eq, fresh);
    FOForcer serial(m, Exec::Serial), par(m, Exec::Parallel);
    for (int v = 0; v < static_cast<int>(m.frame.size()); ++v)
      for (int e : m.domains[v]) {
        ElemAssignment a{{"x", e}};
        bool ref = reference::force_fo(m, v, f, a);
        ++seen[ref];
        EXPECT_EQ(serial.forces(v, f, a), ref) << render(f);
        EXPECT_EQ(par.forces(v, f, a), ref) << render(f);
      }
  }
  EXPECT_GT(seen[0], 0);
  EXPECT_GT(seen[1], 0);
}

TEST(CrossOracle, SetModels) {
  int seen[2] = {0, 0};
  std::mt19937_64 rng(104);
  for (int i = 0; i < 150; ++i) {
    SetKripkeModel m = fixtures::random_set_model(rng, 3);
    int fresh = 0;
    Formula f = fixtures::random_set_formula(rng, 2, fresh);
    SetForcer fz(m);
    for (int v = 0; v < static_cast<int>(m.frame.size()); ++v) {
      bool ref = reference::force_set(m, v, f);
      ++seen[ref];
      EXPECT_EQ(fz.forces(v, f), ref) << render(f);
    }
  }
  EXPECT_GT(seen[0], 0);
  EXPECT_GT(seen[1], 0);
}
