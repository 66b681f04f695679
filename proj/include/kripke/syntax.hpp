#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kripke/hf.hpp"

namespace kripke {

enum class Language { Prop, FO, FOEq, Set };

std::string_view to_string(Language l);
Language language_from_string(std::string_view s);

struct Term {
  enum class Kind { Var, Const, Fn, Lit };
  Kind kind = Kind::Var;
  std::string name;
  std::vector<Term> args;
  HFSet value;  // Lit only

  static Term var(std::string n);
  static Term constant(std::string n);
  // Built-in set functions applied to literals fold to a literal, so parsed
  // and constructed terms share one normal form.
  static Term fn(std::string n, std::vector<Term> args);
  static Term lit(HFSet v);

  bool operator==(const Term& o) const = default;
};

// Set-language term functions: set (the {t,...} builder), pair, fst, snd,
// succ, add, rank, seq. Partial: nullopt when undefined.
bool is_builtin(std::string_view name);
std::optional<HFSet> apply_builtin(std::string_view name, std::span<const HFSet> args);

// Cap on ordinals produced by add/seq/rank so a term cannot allocate an
// arbitrarily long ordinal chain (ordinal n interns sets of total size n^2/2).
inline constexpr std::size_t kMaxTermOrdinal = 1024;

enum class Op { Bot, Prop, Pred, Eq, Mem, And, Or, Impl, Exists, Forall, BExists, BForall };

struct FormulaNode;

class Formula {
 public:
  Formula();  // false

  static Formula bot();
  static Formula top();  // false -> false
  static Formula prop(std::string name);
  static Formula pred(std::string symbol, std::vector<Term> args);
  static Formula eq(Term a, Term b);
  static Formula mem(Term a, Term b);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula impl(Formula a, Formula b);
  static Formula neg(Formula a);
  static Formula iff(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);
  static Formula bexists(std::string var, Term bound, Formula body);
  static Formula bforall(std::string var, Term bound, Formula body);

  Op op() const;
  // Letter, predicate symbol, or bound variable depending on op().
  const std::string& name() const;
  const std::vector<Term>& terms() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& body() const;
  const Term& bound() const;

  bool is_atom() const;
  bool is_quantifier() const;
  bool is_negation() const;  // φ -> false

  std::size_t hash() const;
  std::size_t size() const;
  const FormulaNode* node() const { return n_.get(); }

  bool operator==(const Formula& o) const;

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : n_(std::move(n)) {}
  static Formula make(FormulaNode n);
  std::shared_ptr<const FormulaNode> n_;
};

struct FormulaNode {
  Op op = Op::Bot;
  std::string name;
  std::vector<Term> terms;
  std::vector<Formula> kids;
  std::size_t hash = 0;
  std::size_t size = 1;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

std::size_t term_hash(const Term& t);

struct Signature {
  std::map<std::string, int> relations;  // arity 0 = propositional letter
  std::set<std::string> constants;
  std::map<std::string, int> functions;
  std::string E = "E";

  void validate() const;  // throws on duplicate names or a used E
  std::vector<std::string> relation_order() const;  // sorted, fixes R_i indices
};

// Parsing / printing
Formula parse(std::string_view text, Language lang, const Signature* sig = nullptr);
// Structural parse with no language validation.
Formula parse_any(std::string_view text, const Signature* sig = nullptr);
Term parse_term(std::string_view text, const Signature* sig = nullptr);
std::string render(const Formula& f);
std::string render(const Term& t);

void check_language(const Formula& f, Language lang);  // throws LanguageError
bool fits_language(const Formula& f, Language lang);
Language infer_language(const Formula& f);

nlohmann::json to_json(const Formula& f);
Formula formula_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Term& t);
Term term_from_json(const nlohmann::json& j);

// Structure
std::vector<std::string> free_vars(const Formula& f);
std::vector<std::string> term_vars(const Term& t);
std::set<std::string> all_var_names(const Formula& f);
std::vector<std::string> letters(const Formula& f);
std::map<std::string, int> predicate_arities(const Formula& f);
std::vector<Formula> subformulas(const Formula& f);  // distinct, children first
int depth(const Formula& f);
std::string fresh_name(std::string_view base, const std::set<std::string>& avoid);

Formula substitute(const Formula& f, const std::map<std::string, Term>& s);
Term substitute(const Term& t, const std::map<std::string, Term>& s);
Formula rename_letters(const Formula& f, const std::map<std::string, std::string>& m);
bool alpha_equivalent(const Formula& a, const Formula& b);

// Set-language transforms
Formula desugar(const Formula& f);    // bounded quantifiers to their abbreviations
Formula normalize(const Formula& f);  // rename apart, then resugar bounded patterns

struct FormulaClass {
  enum class Tag { Delta0, SigmaN, Unclassified };
  Tag tag = Tag::Unclassified;
  int n = 0;
  bool operator==(const FormulaClass& o) const = default;
  std::string str() const;
};
// Least n with f in Sigma_n for the displayed shapes; Pi_n counts as
// Sigma_{n+1}.
FormulaClass classify(const Formula& f);

// Translations on first-order syntax
Formula relativize_E(const Formula& f, const std::string& E = "E");
Formula eliminate_function_symbols(const Signature& sig, const Formula& f);

}  // namespace kripke
