#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kripke/exec.hpp"
#include "kripke/frame.hpp"
#include "kripke/syntax.hpp"

namespace kripke {

struct PropModel {
  Frame frame;
  Valuation valuation;
};

// A propositional formula compiled to a postorder program; evaluating it
// fills the forcing table (one node set per subformula).
class PropProgram {
 public:
  explicit PropProgram(const Formula& f);
  const std::vector<std::string>& letters() const { return letters_; }
  // letter_sets is aligned with letters()
  NodeSet eval(const Frame& fr, const std::vector<NodeSet>& letter_sets) const;
  std::vector<NodeSet> table(const Frame& fr, const std::vector<NodeSet>& letter_sets) const;
  const std::vector<Formula>& subformulas() const { return subs_; }

 private:
  struct Instr {
    Op op;
    int a = -1, b = -1;  // operand slots, or letter index for Prop
  };
  std::vector<Instr> code_;
  std::vector<Formula> subs_;
  std::vector<std::string> letters_;
};

NodeSet forcing_set(const PropModel& m, const Formula& f);
bool force_prop(const PropModel& m, int node, const Formula& f);
bool force_prop(const PropModel& m, const std::string& node, const Formula& f);

struct PersistenceCounterexample {
  Formula formula;
  int lower;
  int upper;
};
std::optional<PersistenceCounterexample> check_persistence(const PropModel& m, const Formula& f);

bool frame_validates(const Frame& fr, const Formula& f, Exec exec = Exec::Parallel);

struct Decision {
  bool valid = true;  // no countermodel with <= bound nodes
  int bound = 0;
  std::optional<PropModel> countermodel;
  int refuting_node = -1;
  std::uint64_t frames_checked = 0;
};
Decision ipc_decide(const Formula& f, int bound = 6, Exec exec = Exec::Parallel);

bool classical_tautology(const Formula& f);

nlohmann::json prop_model_to_json(const PropModel& m);
PropModel prop_model_from_json(const nlohmann::json& j);  // validates

}  // namespace kripke
