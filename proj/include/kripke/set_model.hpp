#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "kripke/frame.hpp"
#include "kripke/hf.hpp"
#include "kripke/syntax.hpp"
#include "kripke/universe.hpp"

namespace kripke {

// Node index -> classical domain.
using SoundAssignment = std::vector<Universe>;

// Kripke model with classical domains: membership at v is actual ∈
// restricted to D_v, equality is identity.
struct SetKripkeModel {
  Frame frame;
  std::vector<Universe> universes;
  const Universe& D(int v) const { return universes.at(v); }
};

// Throws ModelError on a bad frame, a non-transitive universe or a
// non-monotone assignment.
SetKripkeModel build_classical_model(const Frame& fr, SoundAssignment asg);
std::vector<std::string> sound_assignment_violations(const Frame& fr, const SoundAssignment& asg);

// Production forcing. Compiled subformulas are interned, and results are
// memoized per (subformula, node, values of its free variables).
// Not thread-safe; use one instance per thread.
class SetForcer {
 public:
  explicit SetForcer(std::shared_ptr<const SetKripkeModel> m);
  explicit SetForcer(const SetKripkeModel& m) : SetForcer(std::make_shared<const SetKripkeModel>(m)) {}

  // Throws EvalError for a missing parameter or one outside D_v.
  bool forces(int node, const Formula& f, const SetAssignment& params = {});
  // First x in D_v (canonical order) with v forcing body[var := x].
  std::optional<HFSet> witness(int node, const std::string& var, const Formula& body, const SetAssignment& params = {});
  const SetKripkeModel& model() const { return *m_; }
  std::size_t memo_size() const { return memo_.size(); }
  void clear() { memo_.clear(); }

 private:
  struct CTerm {
    Term::Kind kind = Term::Kind::Lit;
    int var = -1;
    HFSet value;
    std::string fn;
    std::vector<CTerm> args;
  };
  struct CNode {
    Op op = Op::Bot;
    std::vector<CTerm> terms;
    int a = -1, b = -1;
    int var = -1;
    CTerm bound;
    std::vector<int> fv;
    std::optional<CTerm> witness_term;  // exists x (x = t), x not in t
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& k) const;
  };

  int var_id(const std::string& v);
  CTerm compile_term(const Term& t);
  int compile(const Formula& f);
  std::optional<HFSet> value(const CTerm& t) const;
  bool eval(int cn, int node);
  bool eval_raw(const CNode& c, int node);
  bool quant_body(const CNode& c, int node, HFSet x);

  std::shared_ptr<const SetKripkeModel> m_;
  std::vector<std::vector<int>> up_;
  std::unordered_map<std::string, int> vars_;
  std::unordered_map<Formula, int, FormulaHash> interned_;
  std::vector<CNode> nodes_;
  std::vector<HFSet> env_;
  std::unordered_map<std::vector<std::uint32_t>, bool, KeyHash> memo_;
};

bool force_set(const SetKripkeModel& m, int node, const Formula& f, const SetAssignment& params = {});

struct LocalityRow {
  int node;
  bool forced;
  bool classical;
};
struct LocalityReport {
  std::vector<LocalityRow> rows;  // nodes whose domain holds all parameters
  std::vector<LocalityRow> mismatches() const;
  bool ok() const { return mismatches().empty(); }
};
// Throws LanguageError unless f is Delta0.
LocalityReport check_local_evaluation(const SetKripkeModel& m, const Formula& f, const SetAssignment& params = {});

Formula universal_closure(const Formula& f);

struct AxiomNodeResult {
  int node;
  bool forced;
  std::optional<HFSet> witness;  // for existential sentences
};
struct AxiomReport {
  std::string name;
  std::string formula;
  bool checkable = true;  // false for axioms that quantify over omega
  std::vector<AxiomNodeResult> nodes;
  bool forced_everywhere() const;
};
AxiomReport check_axiom(const SetKripkeModel& m, const std::string& name, const Formula& ax);
AxiomReport check_axiom(const SetKripkeModel& m, const std::string& name,
                        const std::optional<Formula>& matrix = std::nullopt);
// Audits an axiom group; each scheme in the group is instantiated with every
// matrix given for it (schemes without matrices are skipped).
std::vector<AxiomReport> audit(const SetKripkeModel& m, const std::string& group,
                               const std::map<std::string, std::vector<Formula>>& matrices = {});

// Classical check that g is a function from a to b (a set of pairs).
bool is_function(HFSet g, HFSet a, HFSet b);

struct ExpWitness {
  int lower, upper;  // v < w
  HFSet a, b, g;
  bool exp_refuted;  // direct forcing confirms v does not force Exp
};
std::optional<ExpWitness> exp_failure_witness(const SetKripkeModel& m);
// Witness search with v fixed.
std::optional<ExpWitness> exp_failure_witness_at(const SetKripkeModel& m, int v);

struct CollapseRow {
  int node;
  std::size_t domain_size;
  bool antecedent, antecedent_refuted, consequent, phi;
};
struct CollapseReport {
  bool conclusive = true;  // false if some domain has fewer than 3 sets
  std::vector<CollapseRow> rows;
  bool phi_everywhere() const;
};
Formula collapse_formula();  // [∃x∃y∀z(z=x ∨ z=y)] → [∃x∀z(z=x)]
CollapseReport check_equality_collapse(const SetKripkeModel& m);

nlohmann::json set_model_to_json(const SetKripkeModel& m);
// Universes are literal lists (closed under tc when "close" is set) or
// "V_n". Validates; throws BudgetError past size_budget.
SetKripkeModel set_model_from_json(const nlohmann::json& j, std::size_t size_budget = kDefaultSizeBudget);

}  // namespace kripke
