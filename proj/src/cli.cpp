#include "kripke/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>
#include <random>
#include <sstream>

#include "kripke/axioms.hpp"
#include "kripke/dejongh.hpp"
#include "kripke/error.hpp"
#include "kripke/fo.hpp"
#include "kripke/io.hpp"
#include "kripke/mimic.hpp"
#include "kripke/prop.hpp"
#include "kripke/set_model.hpp"

namespace kripke {

namespace {

using json = nlohmann::json;

std::size_t budget_of(const RunConfig& cfg) {
  if (cfg.size_budget) return cfg.size_budget;
  if (const char* s = std::getenv("KRIPKE_SIZE_BUDGET")) {
    try {
      std::size_t b = std::stoull(s);
      if (b > 0) return b;
    } catch (const std::exception&) {
    }
    throw Error("KRIPKE_SIZE_BUDGET must be a positive integer");
  }
  return kDefaultSizeBudget;
}

json base_report(const RunConfig& cfg) {
  std::string cmd;
  for (auto& c : cfg.command) cmd += (cmd.empty() ? "" : " ") + c;
  return {{"command", cmd}, {"seed", cfg.seed}};
}

void need(const std::string& what, const std::string& value) {
  if (value.empty()) throw Error("missing " + what);
}

struct Loaded {
  json raw;
  std::string hash;
};
Loaded load(const RunConfig& cfg) {
  need("--model", cfg.model_path);
  Loaded l{read_json_file(cfg.model_path), {}};
  l.hash = model_hash(l.raw);
  return l;
}

std::string verdict_text(const json& rep) {
  std::ostringstream os;
  os << rep.value("command", "") << ": " << rep.value("result", "") << "\n";
  if (rep.contains("first_counterexample")) os << "first counterexample: " << rep["first_counterexample"].dump() << "\n";
  return os.str();
}

RunResult finish(json rep, int code) {
  static const char* names[] = {"PASS", "REFUTED", "FAIL", "INPUT_ERROR"};
  if (!rep.contains("result")) rep["result"] = names[code];
  rep["exit_code"] = code;
  return {code, std::move(rep), {}};
}

RunResult cmd_parse(const RunConfig& cfg) {
  need("formula", cfg.formula);
  Language lang = language_from_string(cfg.lang);
  Formula f = parse(cfg.formula, lang);
  json rep = base_report(cfg);
  rep["lang"] = std::string(to_string(lang));
  rep["rendering"] = render(f);
  rep["ast"] = to_json(f);
  rep["free_vars"] = free_vars(f);
  if (lang == Language::Set) rep["class"] = classify(f).str();
  return finish(rep, kExitPass);
}

RunResult cmd_check(const RunConfig& cfg) {
  Loaded l = load(cfg);
  PropModel m = prop_model_from_json(l.raw);
  need("--formula", cfg.formula);
  Formula f = parse(cfg.formula, Language::Prop);
  json rep = base_report(cfg);
  rep["model_hash"] = l.hash;
  rep["formula"] = render(f);
  NodeSet s = forcing_set(m, f);
  json nodes = json::object();
  int first = -1;
  for (std::size_t v = 0; v < m.frame.size(); ++v) {
    bool b = s >> v & 1;
    nodes[m.frame.name(static_cast<int>(v))] = b;
    if (!b && first < 0) first = static_cast<int>(v);
  }
  rep["nodes"] = nodes;
  if (first >= 0) rep["first_counterexample"] = {{"node", m.frame.name(first)}, {"formula", render(f)}};
  return finish(rep, first < 0 ? kExitPass : kExitRefuted);
}

RunResult cmd_check_fo(const RunConfig& cfg) {
  Loaded l = load(cfg);
  FOModel m = fo_model_from_json(l.raw);
  need("--formula", cfg.formula);
  Formula f = parse(cfg.formula, m.has_equality() ? Language::FOEq : Language::FO);
  if (!free_vars(f).empty()) throw LanguageError("check-fo expects a sentence");
  FOForcer fz(m);
  json rep = base_report(cfg);
  rep["model_hash"] = l.hash;
  rep["formula"] = render(f);
  json nodes = json::object();
  int first = -1;
  for (std::size_t v = 0; v < m.frame.size(); ++v) {
    bool b = fz.forces(static_cast<int>(v), f);
    nodes[m.frame.name(static_cast<int>(v))] = b;
    if (!b && first < 0) first = static_cast<int>(v);
  }
  rep["nodes"] = nodes;
  if (first >= 0) rep["first_counterexample"] = {{"node", m.frame.name(first)}, {"formula", render(f)}};
  return finish(rep, first < 0 ? kExitPass : kExitRefuted);
}

RunResult cmd_decide(const RunConfig& cfg) {
  need("formula", cfg.formula);
  if (cfg.bound < 1) throw Error("--bound must be positive");
  Formula f = parse(cfg.formula, Language::Prop);
  Decision d = ipc_decide(f, cfg.bound);
  json rep = base_report(cfg);
  rep["formula"] = render(f);
  rep["bound"] = cfg.bound;
  rep["valid"] = d.valid;
  rep["frames_checked"] = d.frames_checked;
  if (d.countermodel) {
    rep["countermodel"] = prop_model_to_json(*d.countermodel);
    rep["refuting_node"] = d.countermodel->frame.name(d.refuting_node);
    rep["first_counterexample"] = {{"node", d.countermodel->frame.name(d.refuting_node)}, {"formula", render(f)}};
  }
  return finish(rep, d.valid ? kExitPass : kExitRefuted);
}

std::map<std::string, std::vector<Formula>> parse_matrices(const std::vector<std::string>& items) {
  std::map<std::string, std::vector<Formula>> out;
  for (auto& s : items) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw Error("--matrix expects Scheme=formula, got '" + s + "'");
    out[s.substr(0, eq)].push_back(parse(s.substr(eq + 1), Language::Set));
  }
  return out;
}

RunResult cmd_audit(const RunConfig& cfg) {
  Loaded l = load(cfg);
  SetKripkeModel m = set_model_from_json(l.raw, budget_of(cfg));
  auto reps = audit(m, cfg.axioms, parse_matrices(cfg.matrices));
  json rep = base_report(cfg);
  rep["model_hash"] = l.hash;
  rep["group"] = cfg.axioms;
  rep["axioms"] = json::array();
  bool all = true;
  for (auto& r : reps) {
    rep["axioms"].push_back(axiom_report_json(r, m.frame));
    if (r.checkable && !r.forced_everywhere()) {
      if (all) {
        for (auto& n : r.nodes)
          if (!n.forced) {
            rep["first_counterexample"] = {{"node", m.frame.name(n.node)}, {"formula", r.formula}, {"axiom", r.name}};
            break;
          }
      }
      all = false;
    }
  }
  return finish(rep, all ? kExitPass : kExitRefuted);
}

RunResult cmd_exp_failure(const RunConfig& cfg) {
  Loaded l = load(cfg);
  SetKripkeModel m = set_model_from_json(l.raw, budget_of(cfg));
  auto w = exp_failure_witness(m);
  json rep = base_report(cfg);
  rep["model_hash"] = l.hash;
  rep["found"] = w.has_value();
  if (!w) return finish(rep, kExitPass);
  rep["witness"] = {{"lower", m.frame.name(w->lower)}, {"upper", m.frame.name(w->upper)}, {"a", to_literal(w->a)},
                    {"b", to_literal(w->b)}, {"g", to_literal(w->g)}, {"exp_refuted", w->exp_refuted}};
  rep["first_counterexample"] = {{"node", m.frame.name(w->lower)}, {"formula", render(axiom_exp())},
                                 {"parameters", {{"a", to_literal(w->a)}, {"b", to_literal(w->b)}}}};
  return finish(rep, w->exp_refuted ? kExitRefuted : kExitFailed);
}

RunResult cmd_collapse(const RunConfig& cfg) {
  Loaded l = load(cfg);
  json rep = base_report(cfg);
  rep["model_hash"] = l.hash;
  if (l.raw.contains("domains")) {
    FOModel m = fo_model_from_json(l.raw);
    Formula phi = iqc_schema("TwoElementEq");
    FOForcer fz(m);
    json nodes = json::object();
    int first = -1;
    for (std::size_t v = 0; v < m.frame.size(); ++v) {
      bool b = fz.forces(static_cast<int>(v), phi);
      nodes[m.frame.name(static_cast<int>(v))] = b;
      if (!b && first < 0) first = static_cast<int>(v);
    }
    rep["formula"] = render(phi);
    rep["nodes"] = nodes;
    if (first >= 0) rep["first_counterexample"] = {{"node", m.frame.name(first)}, {"formula", render(phi)}};
    return finish(rep, first < 0 ? kExitPass : kExitRefuted);
  }
  SetKripkeModel m = set_model_from_json(l.raw, budget_of(cfg));
  CollapseReport c = check_equality_collapse(m);
  rep["formula"] = render(collapse_formula());
  rep["conclusive"] = c.conclusive;
  json nodes = json::object();
  for (auto& r : c.rows)
    nodes[m.frame.name(r.node)] = {{"domain_size", r.domain_size}, {"antecedent", r.antecedent},
                                   {"antecedent_refuted", r.antecedent_refuted}, {"consequent", r.consequent},
                                   {"phi", r.phi}};
  rep["nodes"] = nodes;
  for (auto& r : c.rows)
    if (!r.phi) {
      rep["first_counterexample"] = {{"node", m.frame.name(r.node)}, {"formula", render(collapse_formula())}};
      break;
    }
  return finish(rep, c.phi_everywhere() ? kExitPass : kExitFailed);
}

void attach_first_mismatch(json& rep, const json& sub) {
  if (!sub["mismatches"].empty()) rep["first_counterexample"] = sub["mismatches"][0];
}

RunResult cmd_dejongh(const RunConfig& cfg) {
  if (cfg.command.size() < 2) throw Error("dejongh needs prop, relative or mimic");
  const std::string& which = cfg.command[1];
  Loaded l = load(cfg);
  json rep = base_report(cfg);
  rep["model_hash"] = l.hash;
  if (which == "prop" || which == "relative") {
    need("--formula", cfg.formula);
    EquivalenceReport r;
    Frame fr;
    if (which == "prop") {
      PropModel m = prop_model_from_json(l.raw);
      Formula f = parse(cfg.formula, Language::Prop);
      rep["formula"] = render(f);
      r = dejongh_prop_check(m, f);
      fr = m.frame;
    } else {
      FOModel m = fo_model_from_json(l.raw);
      Formula f = parse(cfg.formula, Language::FO);
      rep["formula"] = render(f);
      r = dejongh_relative_check(m, f);
      fr = m.frame;
    }
    rep["report"] = equivalence_report_json(r, fr);
    attach_first_mismatch(rep, rep["report"]);
    rep["result"] = r.ok() ? "PASS" : "FAIL";
    return finish(rep, r.ok() ? kExitPass : kExitFailed);
  }
  if (which == "mimic") {
    FOModel m = fo_model_from_json(l.raw);
    if (cfg.depth < 0) throw Error("--depth must be nonnegative");
    Mimic mm = mimic_build(m);
    std::size_t budget = budget_of(cfg);
    for (std::size_t v = 0; v < m.frame.size(); ++v)
      if (mm.model->D(static_cast<int>(v)).size() > budget) throw BudgetError("mimic universe exceeds the size budget");
    auto sig = signature_of(m);
    std::vector<std::string> vars{"x", "y"};
    std::vector<Formula> fs;
    if (!cfg.formula.empty()) {
      fs.push_back(parse(cfg.formula, Language::FO));
    } else {
      fs = enumerate_formulas(sig, vars, cfg.depth);
      std::mt19937_64 rng(cfg.seed);
      for (int i = 0; i < cfg.random; ++i) fs.push_back(random_formula(rng, sig, vars, cfg.depth + 1));
    }
    MimicCheck r = mimic_check(mm, fs);
    rep["gamma"] = mm.coded.gamma;
    rep["k"] = mm.coded.k;
    json sizes = json::object();
    for (std::size_t v = 0; v < m.frame.size(); ++v)
      sizes[m.frame.name(static_cast<int>(v))] = mm.model->D(static_cast<int>(v)).size();
    rep["universe_sizes"] = sizes;
    json phis = json::object();
    for (auto& [name, body] : mm.tau.relations) phis[name] = render(body.second);
    rep["translation"] = phis;
    rep["report"] = mimic_check_json(r, m.frame);
    attach_first_mismatch(rep, rep["report"]);
    rep["result"] = r.ok() ? "PASS" : "FAIL";
    return finish(rep, r.ok() ? kExitPass : kExitFailed);
  }
  throw Error("unknown dejongh pipeline '" + which + "'");
}

RunResult cmd_frame(const RunConfig& cfg) {
  if (cfg.command.size() < 2 || cfg.command[1] != "export") throw Error("frame supports only 'export'");
  Loaded l = load(cfg);
  Frame fr = frame_from_json(l.raw.contains("frame") ? l.raw["frame"] : l.raw);
  json rep = base_report(cfg);
  rep["model_hash"] = l.hash;
  rep["frame"] = frame_to_json(fr);
  rep["dot"] = to_dot(fr);
  RunResult r = finish(rep, kExitPass);
  if (cfg.output == "dot") r.text = to_dot(fr);
  return r;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Kripke semantics toolkit", "kripke"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* s) {
    s->add_option("--output", cfg.output, "json | text | dot")->check(CLI::IsMember({"json", "text", "dot"}));
    s->add_option("--seed", cfg.seed, "seed recorded in the report");
    s->add_option("--size-budget", cfg.size_budget, "universe size budget")->check(CLI::PositiveNumber);
  };
  auto model = [&](CLI::App* s) { s->add_option("--model", cfg.model_path, "model JSON file"); };
  auto formula = [&](CLI::App* s) {
    s->add_option("--formula", cfg.formula, "formula text");
  };

  auto* p = app.add_subcommand("parse", "parse and render a formula");
  p->add_option("--lang", cfg.lang)->check(CLI::IsMember({"prop", "fo", "foeq", "set"}));
  formula(p);
  p->add_option("text", cfg.formula, "formula text");
  common(p);

  auto* c = app.add_subcommand("check", "forcing in a propositional model");
  model(c), formula(c), common(c);
  auto* cf = app.add_subcommand("check-fo", "forcing of a sentence in a first-order model");
  model(cf), formula(cf), common(cf);

  auto* d = app.add_subcommand("decide", "IPC validity up to a model-size bound");
  d->add_option("--bound", cfg.bound)->check(CLI::PositiveNumber);
  formula(d);
  d->add_option("text", cfg.formula, "formula text");
  common(d);

  auto* a = app.add_subcommand("audit", "axiom audit of a set model");
  model(a), common(a);
  a->add_option("--axioms", cfg.axioms)->check(CLI::IsMember({"ikp", "ikp+", "czf", "izf"}));
  a->add_option("--matrix", cfg.matrices, "scheme matrix, Scheme=formula");

  auto* e = app.add_subcommand("exp-failure", "search a witness against Exp");
  model(e), common(e);
  auto* q = app.add_subcommand("equality-collapse", "two-element collapse formula");
  model(q), common(q);

  auto* dj = app.add_subcommand("dejongh", "translation equivalence sweeps");
  dj->require_subcommand(1);
  for (auto name : {"prop", "relative", "mimic"}) {
    auto* s = dj->add_subcommand(name);
    model(s), formula(s), common(s);
    if (std::string(name) == "mimic") {
      s->add_option("--depth", cfg.depth, "exhaustive formula depth (at most 2)")->check(CLI::NonNegativeNumber);
      s->add_option("--random", cfg.random, "random formulas of depth+1")->check(CLI::NonNegativeNumber);
    }
  }

  auto* fr = app.add_subcommand("frame", "frame utilities");
  fr->require_subcommand(1);
  auto* ex = fr->add_subcommand("export", "export a frame");
  model(ex), common(ex);
  ex->add_flag_callback("--dot", [&] { cfg.output = "dot"; }, "DOT of the Hasse reduction");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::Success& ok) {  // --help, --help-all
    std::ostringstream o, e;
    app.exit(ok, o, e);
    cfg.help = o.str();
    return cfg;
  } catch (const CLI::ParseError& err) {
    throw Error(std::string("bad arguments: ") + err.what());
  }
  for (CLI::App* s = &app; !s->get_subcommands().empty();) {
    s = s->get_subcommands()[0];
    cfg.command.push_back(s->get_name());
  }
  return cfg;
}

RunResult run(const RunConfig& cfg) {
  if (cfg.command.empty()) throw Error("no command");
  const std::string& c = cfg.command[0];
  RunResult r;
  if (c == "parse") r = cmd_parse(cfg);
  else if (c == "check") r = cmd_check(cfg);
  else if (c == "check-fo") r = cmd_check_fo(cfg);
  else if (c == "decide") r = cmd_decide(cfg);
  else if (c == "audit") r = cmd_audit(cfg);
  else if (c == "exp-failure") r = cmd_exp_failure(cfg);
  else if (c == "equality-collapse") r = cmd_collapse(cfg);
  else if (c == "dejongh") r = cmd_dejongh(cfg);
  else if (c == "frame") r = cmd_frame(cfg);
  else throw Error("unknown command '" + c + "'");
  if (r.text.empty()) r.text = cfg.output == "text" ? verdict_text(r.report) : r.report.dump(2) + "\n";
  return r;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInput;
  }
  if (!cfg.help.empty()) {
    out << cfg.help;
    return kExitPass;
  }
  try {
    RunResult r = run(cfg);
    out << r.text;
    return r.exit_code;
  } catch (const std::exception& e) {
    json rep = base_report(cfg);
    rep["result"] = "INPUT_ERROR";
    rep["error"] = e.what();
    rep["exit_code"] = kExitInput;
    if (cfg.output == "json") out << rep.dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace kripke
