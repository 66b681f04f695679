#pragma once

// Batch front end. Every report records the command, the seed and the hashes
// of its input models; same config and seed give a byte-identical report.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace kripke {

inline constexpr int kExitPass = 0;
inline constexpr int kExitRefuted = 1;  // refutation found, as requested
inline constexpr int kExitFailed = 2;   // a verification failed
inline constexpr int kExitInput = 3;    // bad input, config or budget

struct RunConfig {
  std::vector<std::string> command;  // e.g. {"dejongh", "mimic"}
  std::string model_path;
  std::string formula;
  std::string lang = "prop";
  std::string axioms = "ikp";
  std::vector<std::string> matrices;  // Scheme=formula
  std::string output = "json";        // json | text | dot
  int bound = 6;                      // model size for decide
  int depth = 2;                      // formula depth for mimic sweeps
  int random = 0;                     // extra random formulas (depth + 1) for mimic
  std::size_t size_budget = 0;        // 0: KRIPKE_SIZE_BUDGET or the library default
  std::uint64_t seed = 0;
  std::string help;  // set when --help was given; nothing runs
};

struct RunResult {
  int exit_code = kExitPass;
  nlohmann::json report;
  std::string text;  // what gets printed
};

// Throws Error on unknown commands or bad flags.
RunConfig parse_args(const std::vector<std::string>& args);
RunResult run(const RunConfig& cfg);
// parse_args + run + printing; input errors map to kExitInput.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kripke
