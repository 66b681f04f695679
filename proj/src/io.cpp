#include "kripke/io.hpp"

#include <fstream>
#include <sstream>

#include "kripke/error.hpp"

namespace kripke {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("malformed JSON in '" + path + "': " + e.what());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string model_hash(const nlohmann::json& model) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a64(model.dump());
  return os.str();
}

namespace {

nlohmann::json row_json(const EquivRow& r, const Frame& fr) {
  return {{"formula", r.formula}, {"node", fr.name(r.node)}, {"assignment", r.assignment},
          {"source", r.source}, {"target", r.target}};
}

}  // namespace

nlohmann::json equivalence_report_json(const EquivalenceReport& rep, const Frame& fr) {
  nlohmann::json j;
  nlohmann::json per_node = nlohmann::json::object();
  for (std::size_t v = 0; v < fr.size(); ++v) per_node[fr.name(static_cast<int>(v))] = nlohmann::json::array();
  for (auto& r : rep.rows) {
    auto row = row_json(r, fr);
    row.erase("node");
    per_node[fr.name(r.node)].push_back(row);
  }
  j["tables"] = per_node;
  j["checked"] = rep.checked;
  j["mismatches"] = nlohmann::json::array();
  for (auto& r : rep.mismatches) j["mismatches"].push_back(row_json(r, fr));
  nlohmann::json failing = nlohmann::json::array();
  for (int v : rep.failing_nodes) failing.push_back(fr.name(v));
  j["failing_nodes"] = failing;
  j["target_fails_there"] = rep.target_fails_there;
  j["translated"] = rep.translated;
  if (!rep.renaming.empty()) j["renaming"] = rep.renaming;
  j["result"] = rep.ok() ? "PASS" : "FAIL";
  return j;
}

nlohmann::json mimic_check_json(const MimicCheck& rep, const Frame& fr) {
  nlohmann::json j;
  j["formulas"] = rep.formulas;
  j["checked"] = rep.checked;
  j["map_errors"] = rep.map_errors;
  j["mismatches"] = nlohmann::json::array();
  for (auto& r : rep.mismatches) j["mismatches"].push_back(row_json(r, fr));
  j["result"] = rep.ok() ? "PASS" : "FAIL";
  return j;
}

nlohmann::json axiom_report_json(const AxiomReport& rep, const Frame& fr) {
  nlohmann::json j;
  j["axiom"] = rep.name;
  j["formula"] = rep.formula;
  j["checkable"] = rep.checkable;
  nlohmann::json nodes = nlohmann::json::object();
  for (auto& n : rep.nodes) {
    nlohmann::json e{{"forced", n.forced}};
    if (n.witness) e["witness"] = to_literal(*n.witness);
    nodes[fr.name(n.node)] = e;
  }
  j["nodes"] = nodes;
  j["forced_everywhere"] = rep.forced_everywhere();
  return j;
}

}  // namespace kripke
