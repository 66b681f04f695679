#pragma once

// Naive recursive forcing, clause by clause, with no tables, memoization or
// persistence shortcuts. Kept as the serial reference and cross-oracle for
// the production evaluators.

#include "kripke/fo.hpp"
#include "kripke/prop.hpp"
#include "kripke/set_model.hpp"

namespace kripke::reference {

bool force_prop(const PropModel& m, int node, const Formula& f);
bool force_fo(const FOModel& m, int node, const Formula& f, const ElemAssignment& a = {});
bool force_set(const SetKripkeModel& m, int node, const Formula& f, const SetAssignment& a = {});

}  // namespace kripke::reference
