#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zkgame/bcs.hpp"

namespace zkgame::cli {

using json = nlohmann::json;

// Exactly one of builtin / cnf / bcs (a BCS JSON file).
struct SourceSpec {
  std::string builtin, cnf, bcs;
  int c_max = 8;
};

// Builtins: "magic-square", "tiny-3sat" (3 variables, 2 clauses).
Bcs load_source(const SourceSpec& src);

struct CommandResult {
  json report;
  bool pass = true;  // decides the exit code
};

CommandResult cmd_build(const SourceSpec& src);
CommandResult cmd_transform(const SourceSpec& src, const std::vector<std::string>& passes,
                            std::uint64_t seed);
// strategy: "pauli" (magic-square cc/cv games) or "classical".
CommandResult cmd_value(const SourceSpec& src, const std::vector<std::string>& passes,
                        bool classical, const std::string& strategy);

struct ZkTestOptions {
  std::string suite = "all";  // uniformity | probe | fidelity | all
  bool exact = true;
  std::uint64_t seed = 0;
  int samples = 20000;        // sampling-mode uniformity
  int fidelity_limit = 16;    // clause questions compared per run
};
CommandResult cmd_zk_test(const SourceSpec& src, const std::vector<std::string>& passes,
                          const ZkTestOptions& opts);

// provers: pauli | classical | honest | simulator. policy: honest | uniform.
CommandResult cmd_run(const SourceSpec& src, const std::vector<std::string>& passes,
                      const std::string& provers, const std::string& policy, std::size_t rounds,
                      std::uint64_t seed, int jobs);

// Full command line; returns the process exit code.
int main_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace zkgame::cli
