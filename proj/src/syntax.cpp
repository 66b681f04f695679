#include "kripke/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>

#include "kripke/coding.hpp"
#include "kripke/error.hpp"

namespace kripke {

std::string_view to_string(Language l) {
  switch (l) {
    case Language::Prop: return "prop";
    case Language::FO: return "fo";
    case Language::FOEq: return "foeq";
    case Language::Set: return "set";
  }
  return "?";
}

Language language_from_string(std::string_view s) {
  if (s == "prop") return Language::Prop;
  if (s == "fo") return Language::FO;
  if (s == "foeq") return Language::FOEq;
  if (s == "set") return Language::Set;
  throw Error("unknown language '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- terms

Term Term::var(std::string n) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(n);
  return t;
}

Term Term::constant(std::string n) {
  Term t;
  t.kind = Kind::Const;
  t.name = std::move(n);
  return t;
}

Term Term::lit(HFSet v) {
  Term t;
  t.kind = Kind::Lit;
  t.value = v;
  return t;
}

Term Term::fn(std::string n, std::vector<Term> args) {
  if (is_builtin(n) &&
      std::all_of(args.begin(), args.end(), [](const Term& a) { return a.kind == Kind::Lit; })) {
    std::vector<HFSet> vals;
    for (auto& a : args) vals.push_back(a.value);
    if (auto v = apply_builtin(n, vals)) return lit(*v);
  }
  Term t;
  t.kind = Kind::Fn;
  t.name = std::move(n);
  t.args = std::move(args);
  return t;
}

bool is_builtin(std::string_view n) {
  return n == "set" || n == "pair" || n == "fst" || n == "snd" || n == "succ" || n == "add" ||
         n == "rank" || n == "seq";
}

std::optional<HFSet> apply_builtin(std::string_view n, std::span<const HFSet> a) {
  auto arity = [&](std::size_t k) {
    if (a.size() != k) throw LanguageError("built-in '" + std::string(n) + "' expects " + std::to_string(k) + " arguments");
  };
  if (n == "set") return HFSet::make(std::vector<HFSet>(a.begin(), a.end()));
  if (n == "pair") {
    arity(2);
    return kpair(a[0], a[1]);
  }
  if (n == "fst" || n == "snd") {
    arity(1);
    auto p = a[0].as_pair();
    if (!p) return std::nullopt;
    return n == "fst" ? p->first : p->second;
  }
  if (n == "succ") {
    arity(1);
    return successor(a[0]);
  }
  if (n == "add") {
    arity(2);
    auto x = a[0].as_natural();
    auto y = a[1].as_natural();
    if (!x || !y || *x + *y > kMaxTermOrdinal) return std::nullopt;
    return ordinal(*x + *y);
  }
  if (n == "rank") {
    arity(1);
    return ordinal(a[0].rank());
  }
  if (n == "seq") {
    std::vector<BigNat> s;
    for (auto x : a) {
      auto k = x.as_natural();
      if (!k) return std::nullopt;
      s.push_back(*k);
    }
    BigNat c = code_seq(s);
    if (c > kMaxTermOrdinal) return std::nullopt;
    return ordinal(static_cast<std::size_t>(c));
  }
  throw LanguageError("unknown built-in '" + std::string(n) + "'");
}

std::size_t term_hash(const Term& t) {
  std::size_t h = std::hash<int>()(static_cast<int>(t.kind)) * 31 + std::hash<std::string>()(t.name);
  if (t.kind == Term::Kind::Lit) h = h * 131 + t.value.id();
  for (auto& a : t.args) h = h * 1000003 + term_hash(a);
  return h;
}

// ------------------------------------------------------------- formulas

namespace {

const Formula& bot_singleton() {
  static const Formula f = Formula::bot();
  return f;
}

}  // namespace

Formula Formula::make(FormulaNode n) {
  std::size_t h = static_cast<std::size_t>(n.op) * 0x9e3779b97f4a7c15ull;
  h ^= std::hash<std::string>()(n.name) + (h << 6) + (h >> 2);
  for (auto& t : n.terms) h ^= term_hash(t) + 0x9e3779b9 + (h << 6) + (h >> 2);
  n.size = 1;
  for (auto& k : n.kids) {
    h ^= k.hash() + 0x9e3779b9 + (h << 6) + (h >> 2);
    n.size += k.size();
  }
  n.hash = h;
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula::Formula() : n_(bot_singleton().n_) {}

Formula Formula::bot() {
  static const std::shared_ptr<const FormulaNode> b = [] {
    FormulaNode n;
    n.op = Op::Bot;
    n.hash = 0x51ed270b;
    return std::make_shared<const FormulaNode>(n);
  }();
  return Formula(b);
}

Formula Formula::top() { return impl(bot(), bot()); }

Formula Formula::prop(std::string name) {
  FormulaNode n;
  n.op = Op::Prop;
  n.name = std::move(name);
  return make(std::move(n));
}

Formula Formula::pred(std::string symbol, std::vector<Term> args) {
  FormulaNode n;
  n.op = Op::Pred;
  n.name = std::move(symbol);
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula Formula::eq(Term a, Term b) {
  FormulaNode n;
  n.op = Op::Eq;
  n.terms = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::mem(Term a, Term b) {
  FormulaNode n;
  n.op = Op::Mem;
  n.terms = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::conj(Formula a, Formula b) {
  FormulaNode n;
  n.op = Op::And;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::disj(Formula a, Formula b) {
  FormulaNode n;
  n.op = Op::Or;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::impl(Formula a, Formula b) {
  FormulaNode n;
  n.op = Op::Impl;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::neg(Formula a) { return impl(std::move(a), bot()); }

Formula Formula::iff(Formula a, Formula b) { return conj(impl(a, b), impl(b, a)); }

Formula Formula::exists(std::string var, Formula body) {
  FormulaNode n;
  n.op = Op::Exists;
  n.name = std::move(var);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
  FormulaNode n;
  n.op = Op::Forall;
  n.name = std::move(var);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::bexists(std::string var, Term bound, Formula body) {
  FormulaNode n;
  n.op = Op::BExists;
  n.name = std::move(var);
  n.terms = {std::move(bound)};
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::bforall(std::string var, Term bound, Formula body) {
  FormulaNode n;
  n.op = Op::BForall;
  n.name = std::move(var);
  n.terms = {std::move(bound)};
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Op Formula::op() const { return n_->op; }
const std::string& Formula::name() const { return n_->name; }
const std::vector<Term>& Formula::terms() const { return n_->terms; }
const Formula& Formula::lhs() const { return n_->kids.at(0); }
const Formula& Formula::rhs() const { return n_->kids.at(1); }
const Formula& Formula::body() const { return n_->kids.at(0); }
const Term& Formula::bound() const { return n_->terms.at(0); }
std::size_t Formula::hash() const { return n_->hash; }
std::size_t Formula::size() const { return n_->size; }

bool Formula::is_atom() const {
  switch (op()) {
    case Op::Bot:
    case Op::Prop:
    case Op::Pred:
    case Op::Eq:
    case Op::Mem: return true;
    default: return false;
  }
}

bool Formula::is_quantifier() const {
  switch (op()) {
    case Op::Exists:
    case Op::Forall:
    case Op::BExists:
    case Op::BForall: return true;
    default: return false;
  }
}

bool Formula::is_negation() const { return op() == Op::Impl && rhs().op() == Op::Bot; }

bool Formula::operator==(const Formula& o) const {
  if (n_ == o.n_) return true;
  if (n_->hash != o.n_->hash || n_->op != o.n_->op || n_->size != o.n_->size) return false;
  return n_->name == o.n_->name && n_->terms == o.n_->terms && n_->kids == o.n_->kids;
}

// ------------------------------------------------------------ signature

void Signature::validate() const {
  std::set<std::string> seen;
  auto add = [&](const std::string& s) {
    if (!seen.insert(s).second) throw Error("symbol '" + s + "' declared twice");
  };
  for (auto& [r, a] : relations) add(r);
  for (auto& c : constants) add(c);
  for (auto& [f, a] : functions) add(f);
  if (seen.count(E)) throw Error("relativization symbol '" + E + "' already used");
}

std::vector<std::string> Signature::relation_order() const {
  std::vector<std::string> out;
  for (auto& [r, a] : relations) out.push_back(r);
  return out;
}

// ------------------------------------------------------------- printing

std::string render(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::Const: return t.name;
    case Term::Kind::Lit: return to_literal(t.value);
    case Term::Kind::Fn: {
      bool builder = t.name == "set";
      std::string s = builder ? "{" : t.name + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ", ";
        s += render(t.args[i]);
      }
      return s + (builder ? "}" : ")");
    }
  }
  return "?";
}

namespace {

std::string term_list(const std::vector<Term>& ts) {
  std::string s;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) s += ", ";
    s += render(ts[i]);
  }
  return s;
}

// Precedence: 1 implication (right assoc), 2 disjunction, 3 conjunction,
// 4 unary (negation, quantifiers, atoms).
std::string render_at(const Formula& f, int ctx) {
  auto wrap = [&](int prec, std::string s) { return prec < ctx ? "(" + s + ")" : s; };
  switch (f.op()) {
    case Op::Bot: return "false";
    case Op::Prop: return f.name();
    case Op::Pred: return f.name() + "(" + term_list(f.terms()) + ")";
    case Op::Eq: return wrap(4, render(f.terms()[0]) + " = " + render(f.terms()[1]));
    case Op::Mem: return wrap(4, render(f.terms()[0]) + " in " + render(f.terms()[1]));
    case Op::And: return wrap(3, render_at(f.lhs(), 3) + " & " + render_at(f.rhs(), 4));
    case Op::Or: return wrap(2, render_at(f.lhs(), 2) + " | " + render_at(f.rhs(), 3));
    case Op::Impl:
      if (f.is_negation()) return "~" + render_at(f.lhs(), 4);
      return wrap(1, render_at(f.lhs(), 2) + " -> " + render_at(f.rhs(), 1));
    case Op::Exists:
    case Op::Forall:
    case Op::BExists:
    case Op::BForall: {
      bool ex = f.op() == Op::Exists || f.op() == Op::BExists;
      std::string head = std::string(ex ? "exists " : "forall ") + f.name();
      bool bounded = f.op() == Op::BExists || f.op() == Op::BForall;
      if (bounded) head += " in " + render(f.bound());
      const Formula& b = f.body();
      bool bare = !bounded && (b.is_quantifier() || b.is_negation() || b.op() == Op::Pred ||
                               b.op() == Op::Prop || b.op() == Op::Bot);
      return head + (bare ? " " + render_at(b, 4) : " (" + render_at(b, 0) + ")");
    }
  }
  return "?";
}

}  // namespace

std::string render(const Formula& f) { return render_at(f, 0); }

// -------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, Number, LParen, RParen, LBrace, RBrace, Comma, Eq, Neq, Arrow, Iff, And, Or, Not, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool is_keyword(const std::string& s) {
  return s == "forall" || s == "exists" || s == "in" || s == "false" || s == "true" || s == "ord";
}

std::vector<Token> lex(std::string_view t) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < t.size()) {
    char c = t[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < t.size() && (std::isalnum(static_cast<unsigned char>(t[i])) || t[i] == '_' || t[i] == '\'')) ++i;
      out.push_back({Tok::Ident, std::string(t.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
      out.push_back({Tok::Number, std::string(t.substr(start, i - start)), start});
      continue;
    }
    auto two = t.substr(i, 2);
    auto three = t.substr(i, 3);
    if (three == "<->") {
      out.push_back({Tok::Iff, "<->", start});
      i += 3;
    } else if (two == "->") {
      out.push_back({Tok::Arrow, "->", start});
      i += 2;
    } else if (two == "!=") {
      out.push_back({Tok::Neq, "!=", start});
      i += 2;
    } else {
      Tok k;
      switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case ',': k = Tok::Comma; break;
        case '=': k = Tok::Eq; break;
        case '&': k = Tok::And; break;
        case '|': k = Tok::Or; break;
        case '~': k = Tok::Not; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
      out.push_back({k, std::string(1, c), start});
      ++i;
    }
  }
  out.push_back({Tok::End, "", t.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Signature* sig) : toks_(lex(text)), sig_(sig) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

  Term term_all() {
    Term t = term();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(i_++, toks_.size() - 1)]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++i_;
      return true;
    }
    return false;
  }
  bool accept_kw(std::string_view kw) {
    if (peek().kind == Tok::Ident && peek().text == kw) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(Tok k, std::string_view what) {
    if (!accept(k)) throw ParseError("expected " + std::string(what) + ", found '" + peek().text + "'", peek().pos);
  }
  std::string ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text))
      throw ParseError("expected identifier, found '" + t.text + "'", t.pos);
    ++i_;
    return t.text;
  }

  Formula formula() {
    Formula a = disjunction();
    if (accept(Tok::Arrow)) return Formula::impl(a, formula());
    if (accept(Tok::Iff)) return Formula::iff(a, formula());
    return a;
  }

  Formula disjunction() {
    Formula a = conjunction();
    while (accept(Tok::Or)) a = Formula::disj(a, conjunction());
    return a;
  }

  Formula conjunction() {
    Formula a = unary();
    while (accept(Tok::And)) a = Formula::conj(a, unary());
    return a;
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::neg(unary());
    if (peek().kind == Tok::Ident && (peek().text == "forall" || peek().text == "exists")) {
      bool ex = next().text == "exists";
      std::string v = ident();
      if (accept_kw("in")) {
        Term b = term();
        Formula body = unary();
        return ex ? Formula::bexists(v, b, body) : Formula::bforall(v, b, body);
      }
      Formula body = unary();
      return ex ? Formula::exists(v, body) : Formula::forall(v, body);
    }
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  bool relation_follows() const {
    auto k = peek().kind;
    return k == Tok::Eq || k == Tok::Neq || (k == Tok::Ident && peek().text == "in");
  }

  Formula relation(Term lhs) {
    if (accept(Tok::Eq)) return Formula::eq(lhs, term());
    if (accept(Tok::Neq)) return Formula::neg(Formula::eq(lhs, term()));
    if (accept_kw("in")) return Formula::mem(lhs, term());
    throw ParseError("expected '=' or 'in', found '" + peek().text + "'", peek().pos);
  }

  Formula atom() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "false") {
      ++i_;
      return Formula::bot();
    }
    if (t.kind == Tok::Ident && t.text == "true") {
      ++i_;
      return Formula::top();
    }
    if (t.kind == Tok::LBrace || (t.kind == Tok::Ident && t.text == "ord")) return relation(term());
    if (t.kind != Tok::Ident || is_keyword(t.text)) throw ParseError("expected formula, found '" + t.text + "'", t.pos);
    std::string name = ident();
    if (peek().kind == Tok::LParen) {
      ++i_;
      std::vector<Term> args = arguments();
      if (relation_follows()) return relation(Term::fn(name, std::move(args)));
      return Formula::pred(name, std::move(args));
    }
    if (relation_follows()) return relation(name_term(name));
    return Formula::prop(name);
  }

  // after '(' ; consumes ')'
  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (accept(Tok::RParen)) return args;
    do args.push_back(term());
    while (accept(Tok::Comma));
    expect(Tok::RParen, "')'");
    return args;
  }

  Term name_term(const std::string& n) {
    if (sig_ && sig_->constants.count(n)) return Term::constant(n);
    return Term::var(n);
  }

  Term term() {
    if (accept(Tok::LBrace)) {
      std::vector<Term> elems;
      if (!accept(Tok::RBrace)) {
        do elems.push_back(term());
        while (accept(Tok::Comma));
        expect(Tok::RBrace, "'}'");
      }
      return Term::fn("set", std::move(elems));
    }
    if (accept_kw("ord")) {
      expect(Tok::LParen, "'('");
      const Token& n = peek();
      if (n.kind != Tok::Number) throw ParseError("expected a natural number", n.pos);
      ++i_;
      std::size_t k = std::stoul(n.text);
      expect(Tok::RParen, "')'");
      return Term::lit(ordinal(k));
    }
    std::string name = ident();
    // application needs the '(' right after the name: in `exists x in a (...)`
    // the parenthesis opens the body
    const Token& prev = toks_[i_ - 1];
    if (peek().kind == Tok::LParen && peek().pos == prev.pos + prev.text.size()) {
      ++i_;
      return Term::fn(name, arguments());
    }
    return name_term(name);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  const Signature* sig_;
};

}  // namespace

Formula parse_any(std::string_view text, const Signature* sig) { return Parser(text, sig).parse_all(); }

Formula parse(std::string_view text, Language lang, const Signature* sig) {
  Formula f = parse_any(text, sig);
  check_language(f, lang);
  return f;
}

Term parse_term(std::string_view text, const Signature* sig) { return Parser(text, sig).term_all(); }

// ------------------------------------------------------------- language

namespace {

void check_term(const Term& t, Language lang) {
  switch (t.kind) {
    case Term::Kind::Var: break;
    case Term::Kind::Const:
      if (lang == Language::Set) throw LanguageError("constant '" + t.name + "' in set language");
      break;
    case Term::Kind::Lit:
      if (lang != Language::Set) throw LanguageError("set literal outside set language");
      break;
    case Term::Kind::Fn:
      if (lang == Language::Set && !is_builtin(t.name))
        throw LanguageError("unknown set-language function '" + t.name + "'");
      if (lang != Language::Set && t.name == "set") throw LanguageError("set builder outside set language");
      for (auto& a : t.args) check_term(a, lang);
      break;
  }
}

void check_node(const Formula& f, Language lang) {
  auto bad = [&](std::string_view what) {
    throw LanguageError(std::string(what) + " not allowed in " + std::string(to_string(lang)) + " language");
  };
  switch (f.op()) {
    case Op::Bot: break;
    case Op::Prop:
      if (lang == Language::Set) bad("propositional letter");
      break;
    case Op::Pred:
      if (lang == Language::Prop || lang == Language::Set) bad("predicate");
      break;
    case Op::Eq:
      if (lang == Language::Prop || lang == Language::FO) bad("equality");
      break;
    case Op::Mem:
      if (lang != Language::Set) bad("membership");
      break;
    case Op::And:
    case Op::Or:
    case Op::Impl: break;
    case Op::Exists:
    case Op::Forall:
      if (lang == Language::Prop) bad("quantifier");
      break;
    case Op::BExists:
    case Op::BForall:
      if (lang != Language::Set) bad("bounded quantifier");
      break;
  }
  for (auto& t : f.terms()) check_term(t, lang);
  for (auto& k : f.node()->kids) check_node(k, lang);
}

}  // namespace

void check_language(const Formula& f, Language lang) { check_node(f, lang); }

bool fits_language(const Formula& f, Language lang) {
  try {
    check_language(f, lang);
    return true;
  } catch (const LanguageError&) {
    return false;
  }
}

Language infer_language(const Formula& f) {
  for (auto l : {Language::Prop, Language::FO, Language::FOEq, Language::Set})
    if (fits_language(f, l)) return l;
  throw LanguageError("formula mixes node kinds of different languages");
}

// ----------------------------------------------------------------- json

nlohmann::json to_json(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var: return {{"var", t.name}};
    case Term::Kind::Const: return {{"const", t.name}};
    case Term::Kind::Lit: return {{"lit", to_literal(t.value)}};
    case Term::Kind::Fn: {
      nlohmann::json args = nlohmann::json::array();
      for (auto& a : t.args) args.push_back(to_json(a));
      return {{"fn", t.name}, {"args", args}};
    }
  }
  return nullptr;
}

Term term_from_json(const nlohmann::json& j) {
  if (j.contains("var")) return Term::var(j.at("var").get<std::string>());
  if (j.contains("const")) return Term::constant(j.at("const").get<std::string>());
  if (j.contains("lit")) return Term::lit(parse_hf_literal(j.at("lit").get<std::string>()));
  if (j.contains("fn")) {
    std::vector<Term> args;
    for (auto& a : j.at("args")) args.push_back(term_from_json(a));
    return Term::fn(j.at("fn").get<std::string>(), std::move(args));
  }
  throw Error("malformed term JSON");
}

namespace {

const char* op_tag(Op op) {
  switch (op) {
    case Op::Bot: return "bot";
    case Op::Prop: return "prop";
    case Op::Pred: return "pred";
    case Op::Eq: return "eq";
    case Op::Mem: return "mem";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Impl: return "impl";
    case Op::Exists: return "exists";
    case Op::Forall: return "forall";
    case Op::BExists: return "bexists";
    case Op::BForall: return "bforall";
  }
  return "?";
}

}  // namespace

nlohmann::json to_json(const Formula& f) {
  nlohmann::json j;
  j["op"] = op_tag(f.op());
  switch (f.op()) {
    case Op::Bot: break;
    case Op::Prop: j["name"] = f.name(); break;
    case Op::Pred:
    case Op::Eq:
    case Op::Mem: {
      if (f.op() == Op::Pred) j["symbol"] = f.name();
      nlohmann::json args = nlohmann::json::array();
      for (auto& t : f.terms()) args.push_back(to_json(t));
      j["args"] = args;
      break;
    }
    case Op::And:
    case Op::Or:
    case Op::Impl:
      j["lhs"] = to_json(f.lhs());
      j["rhs"] = to_json(f.rhs());
      break;
    case Op::BExists:
    case Op::BForall: j["bound"] = to_json(f.bound()); [[fallthrough]];
    case Op::Exists:
    case Op::Forall:
      j["var"] = f.name();
      j["body"] = to_json(f.body());
      break;
  }
  return j;
}

Formula formula_from_json(const nlohmann::json& j) {
  std::string op = j.at("op").get<std::string>();
  auto args = [&] {
    std::vector<Term> ts;
    for (auto& a : j.at("args")) ts.push_back(term_from_json(a));
    return ts;
  };
  if (op == "bot") return Formula::bot();
  if (op == "prop") return Formula::prop(j.at("name").get<std::string>());
  if (op == "pred") return Formula::pred(j.at("symbol").get<std::string>(), args());
  if (op == "eq" || op == "mem") {
    auto ts = args();
    if (ts.size() != 2) throw Error("binary atom needs two arguments");
    return op == "eq" ? Formula::eq(ts[0], ts[1]) : Formula::mem(ts[0], ts[1]);
  }
  if (op == "and") return Formula::conj(formula_from_json(j.at("lhs")), formula_from_json(j.at("rhs")));
  if (op == "or") return Formula::disj(formula_from_json(j.at("lhs")), formula_from_json(j.at("rhs")));
  if (op == "impl") return Formula::impl(formula_from_json(j.at("lhs")), formula_from_json(j.at("rhs")));
  std::string v = j.at("var").get<std::string>();
  Formula body = formula_from_json(j.at("body"));
  if (op == "exists") return Formula::exists(v, body);
  if (op == "forall") return Formula::forall(v, body);
  if (op == "bexists") return Formula::bexists(v, term_from_json(j.at("bound")), body);
  if (op == "bforall") return Formula::bforall(v, term_from_json(j.at("bound")), body);
  throw Error("unknown formula tag '" + op + "'");
}

// ------------------------------------------------------------ structure

namespace {

void collect_term_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  for (auto& a : t.args) collect_term_vars(a, out);
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (f.is_atom()) {
    std::set<std::string> vs;
    for (auto& t : f.terms()) collect_term_vars(t, vs);
    for (auto& v : vs)
      if (!bound.count(v)) out.insert(v);
    return;
  }
  if (f.is_quantifier()) {
    if (f.op() == Op::BExists || f.op() == Op::BForall) {
      std::set<std::string> vs;
      collect_term_vars(f.bound(), vs);
      for (auto& v : vs)
        if (!bound.count(v)) out.insert(v);
    }
    bool added = bound.insert(f.name()).second;
    collect_free(f.body(), bound, out);
    if (added) bound.erase(f.name());
    return;
  }
  collect_free(f.lhs(), bound, out);
  collect_free(f.rhs(), bound, out);
}

}  // namespace

std::vector<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return {out.begin(), out.end()};
}

std::vector<std::string> term_vars(const Term& t) {
  std::set<std::string> out;
  collect_term_vars(t, out);
  return {out.begin(), out.end()};
}

std::set<std::string> all_var_names(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    for (auto& t : g.terms()) collect_term_vars(t, out);
    if (g.is_quantifier()) out.insert(g.name());
    for (auto& k : g.node()->kids) go(k);
  };
  go(f);
  return out;
}

std::vector<std::string> letters(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.op() == Op::Prop) out.insert(g.name());
    for (auto& k : g.node()->kids) go(k);
  };
  go(f);
  return {out.begin(), out.end()};
}

std::map<std::string, int> predicate_arities(const Formula& f) {
  std::map<std::string, int> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.op() == Op::Pred) {
      auto [it, fresh] = out.emplace(g.name(), static_cast<int>(g.terms().size()));
      if (!fresh && it->second != static_cast<int>(g.terms().size()))
        throw LanguageError("predicate '" + g.name() + "' used with two arities");
    }
    for (auto& k : g.node()->kids) go(k);
  };
  go(f);
  return out;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_map<Formula, char, FormulaHash> seen;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (seen.count(g)) return;
    for (auto& k : g.node()->kids) go(k);
    seen.emplace(g, 1);
    out.push_back(g);
  };
  go(f);
  return out;
}

int depth(const Formula& f) {
  if (f.is_atom()) return 0;
  int d = 0;
  for (auto& k : f.node()->kids) d = std::max(d, depth(k));
  return d + 1;
}

std::string fresh_name(std::string_view base, const std::set<std::string>& avoid) {
  std::string b(base);
  if (!avoid.count(b) && !is_keyword(b)) return b;
  for (int i = 1;; ++i) {
    std::string c = b + std::to_string(i);
    if (!avoid.count(c)) return c;
  }
}

Term substitute(const Term& t, const std::map<std::string, Term>& s) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = s.find(t.name);
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::Fn: {
      std::vector<Term> args;
      for (auto& a : t.args) args.push_back(substitute(a, s));
      return Term::fn(t.name, std::move(args));
    }
    default: return t;
  }
}

Formula substitute(const Formula& f, const std::map<std::string, Term>& s) {
  if (s.empty()) return f;
  auto subst_terms = [&] {
    std::vector<Term> ts;
    for (auto& t : f.terms()) ts.push_back(substitute(t, s));
    return ts;
  };
  switch (f.op()) {
    case Op::Bot:
    case Op::Prop: return f;
    case Op::Pred: return Formula::pred(f.name(), subst_terms());
    case Op::Eq: {
      auto ts = subst_terms();
      return Formula::eq(ts[0], ts[1]);
    }
    case Op::Mem: {
      auto ts = subst_terms();
      return Formula::mem(ts[0], ts[1]);
    }
    case Op::And: return Formula::conj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::Or: return Formula::disj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::Impl: return Formula::impl(substitute(f.lhs(), s), substitute(f.rhs(), s));
    default: break;
  }
  // quantifiers
  std::map<std::string, Term> inner = s;
  inner.erase(f.name());
  std::string v = f.name();
  std::set<std::string> incoming;
  for (auto& [k, t] : inner) {
    auto fv = free_vars(f.body());
    if (std::find(fv.begin(), fv.end(), k) == fv.end()) continue;
    collect_term_vars(t, incoming);
  }
  Formula body = f.body();
  if (incoming.count(v)) {
    std::set<std::string> avoid = all_var_names(f);
    avoid.insert(incoming.begin(), incoming.end());
    for (auto& [k, t] : inner) avoid.insert(k);
    std::string nv = fresh_name(v, avoid);
    body = substitute(body, {{v, Term::var(nv)}});
    v = nv;
  }
  body = substitute(body, inner);
  switch (f.op()) {
    case Op::Exists: return Formula::exists(v, body);
    case Op::Forall: return Formula::forall(v, body);
    case Op::BExists: return Formula::bexists(v, substitute(f.bound(), s), body);
    default: return Formula::bforall(v, substitute(f.bound(), s), body);
  }
}

Formula rename_letters(const Formula& f, const std::map<std::string, std::string>& m) {
  switch (f.op()) {
    case Op::Prop: {
      auto it = m.find(f.name());
      return it == m.end() ? f : Formula::prop(it->second);
    }
    case Op::And: return Formula::conj(rename_letters(f.lhs(), m), rename_letters(f.rhs(), m));
    case Op::Or: return Formula::disj(rename_letters(f.lhs(), m), rename_letters(f.rhs(), m));
    case Op::Impl: return Formula::impl(rename_letters(f.lhs(), m), rename_letters(f.rhs(), m));
    case Op::Exists: return Formula::exists(f.name(), rename_letters(f.body(), m));
    case Op::Forall: return Formula::forall(f.name(), rename_letters(f.body(), m));
    default: return f;
  }
}

namespace {

// Rebuild with quantifier children replaced.
Formula rebuild_quant(const Formula& f, std::string v, Formula body) {
  switch (f.op()) {
    case Op::Exists: return Formula::exists(std::move(v), std::move(body));
    case Op::Forall: return Formula::forall(std::move(v), std::move(body));
    case Op::BExists: return Formula::bexists(std::move(v), f.bound(), std::move(body));
    default: return Formula::bforall(std::move(v), f.bound(), std::move(body));
  }
}

Formula rebuild_binary(const Formula& f, Formula a, Formula b) {
  switch (f.op()) {
    case Op::And: return Formula::conj(std::move(a), std::move(b));
    case Op::Or: return Formula::disj(std::move(a), std::move(b));
    default: return Formula::impl(std::move(a), std::move(b));
  }
}

// Rename every bound variable to a canonical name based on binding depth.
Formula canonical_names(const Formula& f, std::map<std::string, std::string>& env, int& counter,
                        const std::string& prefix) {
  if (f.is_atom()) {
    std::map<std::string, Term> s;
    for (auto& [k, v] : env) s.emplace(k, Term::var(v));
    // simultaneous substitution on atoms only; no binders inside atoms
    std::vector<Term> ts;
    for (auto& t : f.terms()) ts.push_back(substitute(t, s));
    switch (f.op()) {
      case Op::Pred: return Formula::pred(f.name(), ts);
      case Op::Eq: return Formula::eq(ts[0], ts[1]);
      case Op::Mem: return Formula::mem(ts[0], ts[1]);
      default: return f;
    }
  }
  if (f.is_quantifier()) {
    std::map<std::string, Term> s;
    for (auto& [k, v] : env) s.emplace(k, Term::var(v));
    std::string nv = prefix + std::to_string(counter++);
    auto saved = env;
    env[f.name()] = nv;
    Formula body = canonical_names(f.body(), env, counter, prefix);
    env = saved;
    switch (f.op()) {
      case Op::Exists: return Formula::exists(nv, body);
      case Op::Forall: return Formula::forall(nv, body);
      case Op::BExists: return Formula::bexists(nv, substitute(f.bound(), s), body);
      default: return Formula::bforall(nv, substitute(f.bound(), s), body);
    }
  }
  Formula a = canonical_names(f.lhs(), env, counter, prefix);
  Formula b = canonical_names(f.rhs(), env, counter, prefix);
  return rebuild_binary(f, a, b);
}

}  // namespace

bool alpha_equivalent(const Formula& a, const Formula& b) {
  std::set<std::string> avoid = all_var_names(a);
  auto vb = all_var_names(b);
  avoid.insert(vb.begin(), vb.end());
  std::string prefix = "_b";
  while (std::any_of(avoid.begin(), avoid.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; }))
    prefix += "_";
  std::map<std::string, std::string> e1, e2;
  int c1 = 0, c2 = 0;
  return canonical_names(a, e1, c1, prefix) == canonical_names(b, e2, c2, prefix);
}

// ------------------------------------------------------ set transforms

Formula desugar(const Formula& f) {
  switch (f.op()) {
    case Op::And:
    case Op::Or:
    case Op::Impl: return rebuild_binary(f, desugar(f.lhs()), desugar(f.rhs()));
    case Op::Exists:
    case Op::Forall: return rebuild_quant(f, f.name(), desugar(f.body()));
    case Op::BExists:
      return Formula::exists(f.name(), Formula::conj(Formula::mem(Term::var(f.name()), f.bound()), desugar(f.body())));
    case Op::BForall:
      return Formula::forall(f.name(), Formula::impl(Formula::mem(Term::var(f.name()), f.bound()), desugar(f.body())));
    default: return f;
  }
}

namespace {

bool term_mentions(const Term& t, const std::string& v) {
  if (t.kind == Term::Kind::Var) return t.name == v;
  for (auto& a : t.args)
    if (term_mentions(a, v)) return true;
  return false;
}

// x in t with x the bound variable and x not in t
bool bounding_atom(const Formula& a, const std::string& x) {
  return a.op() == Op::Mem && a.terms()[0].kind == Term::Kind::Var && a.terms()[0].name == x &&
         !term_mentions(a.terms()[1], x);
}

Formula resugar(const Formula& f) {
  switch (f.op()) {
    case Op::And:
    case Op::Or:
    case Op::Impl: return rebuild_binary(f, resugar(f.lhs()), resugar(f.rhs()));
    case Op::BExists:
    case Op::BForall: return rebuild_quant(f, f.name(), resugar(f.body()));
    case Op::Exists: {
      const Formula& b = f.body();
      if (b.op() == Op::And && bounding_atom(b.lhs(), f.name()))
        return Formula::bexists(f.name(), b.lhs().terms()[1], resugar(b.rhs()));
      return Formula::exists(f.name(), resugar(b));
    }
    case Op::Forall: {
      const Formula& b = f.body();
      if (b.op() == Op::Impl && !b.is_negation() && bounding_atom(b.lhs(), f.name()))
        return Formula::bforall(f.name(), b.lhs().terms()[1], resugar(b.rhs()));
      if (b.is_negation() && bounding_atom(b.lhs(), f.name()))
        return Formula::bforall(f.name(), b.lhs().terms()[1], Formula::bot());
      return Formula::forall(f.name(), resugar(b));
    }
    default: return f;
  }
}

Formula rename_apart(const Formula& f, std::set<std::string>& used, std::map<std::string, std::string>& env) {
  auto subst_env = [&] {
    std::map<std::string, Term> s;
    for (auto& [k, v] : env)
      if (k != v) s.emplace(k, Term::var(v));
    return s;
  };
  if (f.is_atom()) {
    auto s = subst_env();
    std::vector<Term> ts;
    for (auto& t : f.terms()) ts.push_back(substitute(t, s));
    switch (f.op()) {
      case Op::Pred: return Formula::pred(f.name(), ts);
      case Op::Eq: return Formula::eq(ts[0], ts[1]);
      case Op::Mem: return Formula::mem(ts[0], ts[1]);
      default: return f;
    }
  }
  if (f.is_quantifier()) {
    auto s = subst_env();
    std::string nv = fresh_name(f.name(), used);
    used.insert(nv);
    auto saved = env;
    env[f.name()] = nv;
    Formula body = rename_apart(f.body(), used, env);
    env = saved;
    switch (f.op()) {
      case Op::Exists: return Formula::exists(nv, body);
      case Op::Forall: return Formula::forall(nv, body);
      case Op::BExists: return Formula::bexists(nv, substitute(f.bound(), s), body);
      default: return Formula::bforall(nv, substitute(f.bound(), s), body);
    }
  }
  return rebuild_binary(f, rename_apart(f.lhs(), used, env), rename_apart(f.rhs(), used, env));
}

}  // namespace

Formula normalize(const Formula& f) {
  auto fv = free_vars(f);
  std::set<std::string> used(fv.begin(), fv.end());
  std::map<std::string, std::string> env;
  return resugar(rename_apart(f, used, env));
}

std::string FormulaClass::str() const {
  switch (tag) {
    case Tag::Delta0: return "Delta0";
    case Tag::SigmaN: return "Sigma" + std::to_string(n);
    case Tag::Unclassified: return "Unclassified";
  }
  return "?";
}

namespace {

constexpr int kInf = 1 << 20;

struct Levels {
  int s, p;  // least n with the formula in Sigma_n / Pi_n
};

Levels levels(const Formula& f) {
  switch (f.op()) {
    case Op::Bot:
    case Op::Eq:
    case Op::Mem: return {0, 0};
    case Op::And:
    case Op::Or: {
      Levels a = levels(f.lhs()), b = levels(f.rhs());
      return {std::max(a.s, b.s), std::max(a.p, b.p)};
    }
    case Op::Impl: {
      Levels a = levels(f.lhs()), b = levels(f.rhs());
      if (a.s != 0 || a.p != 0) return {kInf, kInf};
      return b;
    }
    case Op::BExists:
    case Op::BForall: {
      Levels b = levels(f.body());
      if (b.s != 0 || b.p != 0) return {kInf, kInf};
      return {0, 0};
    }
    case Op::Exists: {
      Levels b = levels(f.body());
      if (b.s >= kInf && b.p >= kInf) return {kInf, kInf};
      int s = std::min(std::max(b.s, 1), b.p + 1);
      return {s, s + 1};
    }
    case Op::Forall: {
      Levels b = levels(f.body());
      if (b.s >= kInf && b.p >= kInf) return {kInf, kInf};
      int p = std::min(std::max(b.p, 1), b.s + 1);
      return {p + 1, p};
    }
    default: return {kInf, kInf};
  }
}

}  // namespace

FormulaClass classify(const Formula& f) {
  if (!fits_language(f, Language::Set)) throw LanguageError("classify expects a set-language formula");
  Levels l = levels(normalize(f));
  if (l.s >= kInf) return {FormulaClass::Tag::Unclassified, 0};
  if (l.s == 0) return {FormulaClass::Tag::Delta0, 0};
  return {FormulaClass::Tag::SigmaN, l.s};
}

// ------------------------------------------------------ fo translations

namespace {

bool uses_symbol(const Formula& f, const std::string& s) {
  if ((f.op() == Op::Pred || f.op() == Op::Prop) && f.name() == s) return true;
  for (auto& k : f.node()->kids)
    if (uses_symbol(k, s)) return true;
  return false;
}

Formula relativize(const Formula& f, const std::string& E) {
  switch (f.op()) {
    case Op::And:
    case Op::Or:
    case Op::Impl: return rebuild_binary(f, relativize(f.lhs(), E), relativize(f.rhs(), E));
    case Op::Exists:
      return Formula::exists(f.name(), Formula::conj(Formula::pred(E, {Term::var(f.name())}), relativize(f.body(), E)));
    case Op::Forall:
      return Formula::forall(f.name(), Formula::impl(Formula::pred(E, {Term::var(f.name())}), relativize(f.body(), E)));
    case Op::BExists:
    case Op::BForall: throw LanguageError("relativization applies to first-order formulas");
    default: return f;
  }
}

}  // namespace

Formula relativize_E(const Formula& f, const std::string& E) {
  if (uses_symbol(f, E)) throw LanguageError("relativization symbol '" + E + "' already occurs");
  return relativize(f, E);
}

namespace {

struct Flattener {
  const Signature& sig;
  std::set<std::string> used;

  // Replace function applications innermost-first; record graph atoms.
  Term flatten(const Term& t, std::vector<std::pair<std::string, Formula>>& defs) {
    if (t.kind != Term::Kind::Fn) return t;
    auto it = sig.functions.find(t.name);
    if (it == sig.functions.end()) throw LanguageError("unknown function symbol '" + t.name + "'");
    if (it->second != static_cast<int>(t.args.size()))
      throw LanguageError("function '" + t.name + "' expects " + std::to_string(it->second) + " arguments, got " +
                          std::to_string(t.args.size()));
    std::vector<Term> args;
    for (auto& a : t.args) args.push_back(flatten(a, defs));
    std::string v = fresh_name("v", used);
    used.insert(v);
    args.push_back(Term::var(v));
    defs.emplace_back(v, Formula::pred("R_" + t.name, std::move(args)));
    return Term::var(v);
  }

  Formula go(const Formula& f) {
    if (f.op() == Op::Pred || f.op() == Op::Eq) {
      std::vector<std::pair<std::string, Formula>> defs;
      std::vector<Term> ts;
      for (auto& t : f.terms()) ts.push_back(flatten(t, defs));
      if (f.op() == Op::Pred) {
        auto r = sig.relations.find(f.name());
        if (r != sig.relations.end() && r->second != static_cast<int>(ts.size()))
          throw LanguageError("relation '" + f.name() + "' expects " + std::to_string(r->second) + " arguments");
      }
      Formula atom = f.op() == Op::Pred ? Formula::pred(f.name(), ts) : Formula::eq(ts[0], ts[1]);
      if (defs.empty()) return atom;
      Formula m = defs[0].second;
      for (std::size_t i = 1; i < defs.size(); ++i) m = Formula::conj(m, defs[i].second);
      m = Formula::conj(m, atom);
      for (auto it = defs.rbegin(); it != defs.rend(); ++it) m = Formula::exists(it->first, m);
      return m;
    }
    switch (f.op()) {
      case Op::And:
      case Op::Or:
      case Op::Impl: return rebuild_binary(f, go(f.lhs()), go(f.rhs()));
      case Op::Exists:
      case Op::Forall: return rebuild_quant(f, f.name(), go(f.body()));
      default: return f;
    }
  }
};

}  // namespace

Formula eliminate_function_symbols(const Signature& sig, const Formula& f) {
  Flattener fl{sig, all_var_names(f)};
  for (auto& c : sig.constants) fl.used.insert(c);
  return fl.go(f);
}

}  // namespace kripke
