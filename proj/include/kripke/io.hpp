#pragma once

// File loading, model hashes and JSON reports shared by the CLI and tests.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "kripke/dejongh.hpp"
#include "kripke/mimic.hpp"
#include "kripke/set_model.hpp"

namespace kripke {

// Throws ModelError for a missing file or malformed JSON.
nlohmann::json read_json_file(const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);
// FNV-1a over the compact dump; object keys are sorted, so equal models give
// equal hashes.
std::string model_hash(const nlohmann::json& model);

nlohmann::json equivalence_report_json(const EquivalenceReport& rep, const Frame& fr);
nlohmann::json mimic_check_json(const MimicCheck& rep, const Frame& fr);
nlohmann::json axiom_report_json(const AxiomReport& rep, const Frame& fr);

}  // namespace kripke
