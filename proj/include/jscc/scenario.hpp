#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "jscc/network.hpp"
#include "jscc/optimize.hpp"
#include "jscc/sim.hpp"

namespace jscc {

// Exit codes of the command-line front end. Library code throws
// scenario_error carrying one of these; anything else is exit_internal.
enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,        // unexpected exception
  exit_io = 2,              // unreadable scenario path
  exit_normalization = 3,   // pmf or kernel row mass off by more than 1e-9
  exit_schema = 4,          // malformed syntax, wrong types, bad shapes
  exit_unknown_preset = 5,  // unrecognized preset name
  exit_command_mismatch = 6,  // command needs pieces the scenario lacks
  exit_bad_flags = 7,       // command-line usage error
};

class scenario_error : public std::runtime_error {
 public:
  scenario_error(int code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

// A parsed, validated, preset-expanded scenario. At most one chain form is
// populated; chain_optimize marks a file that asks the tool to pick the
// chain by optimization.
struct ScenarioFile {
  std::string name;
  SourceModel source;
  ChannelModel channel;

  ChainFamily family = ChainFamily::thm2;
  bool has_chain = false;
  bool chain_optimize = false;
  int v1_size = 2, v2_size = 2;  // timesharing sizes when optimizing thm1/separation
  std::optional<InputChainThm1> chain_thm1;
  std::optional<InputChainThm2> chain_thm2;
  std::optional<InputChainSeparation> chain_separation;

  SimConfig sim;  // file values over defaults; flags may override later

  // Order-independent expansion of the semantic content (presets resolved,
  // defaults filled, labels dropped); the digest hashes its serialization.
  nlohmann::json canonical;
};

ScenarioFile parse_scenario(const std::string& path);
ScenarioFile parse_scenario_text(const std::string& text);

// FNV-1a 64 over the canonical serialization.
std::uint64_t scenario_digest(const ScenarioFile& sc);

// System joint for whichever chain the file carries; throws
// scenario_error(exit_command_mismatch) when no chain tables are present.
JointPmf assemble_scenario_joint(const ScenarioFile& sc);

}  // namespace jscc
