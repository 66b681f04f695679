#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kripke/exec.hpp"
#include "kripke/frame.hpp"
#include "kripke/syntax.hpp"
#include "kripke/table_eval.hpp"

namespace kripke {

using Tuple = std::vector<int>;
using ElemAssignment = std::map<std::string, int>;

struct Relation {
  int arity = 0;
  std::vector<std::set<Tuple>> at;  // per node; arity 0: {()} means true
  bool holds(int node, const Tuple& t) const { return at[node].count(t) > 0; }
};

// First-order Kripke model. Propositional letters are 0-ary relations.
// congruence present makes it an IQC= model: ∼_v is stored as a set of
// ordered pairs, including the diagonal.
struct FOModel {
  Frame frame;
  std::vector<std::vector<int>> domains;  // per node, sorted element ids
  std::map<std::string, Relation> relations;
  std::optional<std::vector<std::set<std::pair<int, int>>>> congruence;
  std::map<std::string, int> constants;

  bool has_equality() const { return congruence.has_value(); }
  std::size_t num_elems() const;  // 1 + largest id
  Relation& relation(const std::string& name, int arity);  // created empty if absent
  bool in_domain(int node, int e) const;
};

struct FOViolation {
  enum class Kind { Frame, Shape, DomainMonotone, TupleOutsideDomain, RelationMonotone, Arity,
                    CongruenceNotEquivalence, CongruenceIncompatible, CongruenceMonotone, Constant };
  Kind kind;
  std::string detail;
};
std::vector<FOViolation> check_fo_model(const FOModel& m);
void require_valid(const FOModel& m);  // throws ModelError on the first violation

// Production forcing: bottom-up tables over (node, assignment), computed by
// TableEvaluator.
class FOForcer {
 public:
  explicit FOForcer(const FOModel& m, Exec exec = Exec::Parallel);
  bool forces(int node, const Formula& f, const ElemAssignment& a = {});
  std::shared_ptr<const Table> table(const Formula& f) { return eval_.table(f); }
  const FOModel& model() const { return *m_; }

 private:
  void check(const Formula& f) const;
  std::shared_ptr<const FOModel> m_;
  TableEvaluator eval_;
};

bool force_fo(const FOModel& m, int node, const Formula& f, const ElemAssignment& a = {});
bool force_fo(const FOModel& m, const std::string& node, const Formula& f, const ElemAssignment& a = {});

struct FOPersistenceCounterexample {
  Formula formula;
  int lower, upper;
  ElemAssignment assignment;
};
std::optional<FOPersistenceCounterexample> check_fo_persistence(const FOModel& m, const Formula& f);

struct PadResult {
  FOModel model;
  std::vector<std::map<int, int>> maps;  // f_v: D_v -> D'_v (identity embeddings)
  std::map<int, int> origin;             // every element of the padded model -> original
};
// Adds k fresh clones of min D_v above every node v in `nodes` (all nodes if
// empty). A tuple holds at w iff its projection to originals holds at w.
PadResult pad_domains(const FOModel& m, int k, const std::vector<int>& nodes = {});

// Standard refuting models: CD, DNS, DecidableP, TwoElementEq.
FOModel iqc_countermodel(const std::string& name);
Formula iqc_schema(const std::string& name);
std::vector<std::string> iqc_countermodel_names();

nlohmann::json fo_model_to_json(const FOModel& m);
FOModel fo_model_from_json(const nlohmann::json& j);  // validates

}  // namespace kripke
