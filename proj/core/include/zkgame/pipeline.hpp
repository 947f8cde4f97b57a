#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zkgame/bcs.hpp"
#include "zkgame/game.hpp"
#include "zkgame/tableau.hpp"
#include "zkgame/transforms.hpp"

namespace zkgame {

// One pass of a pipeline: cc, cv, oracularize, repeat:k=, obliviate:k=,
// tableau:l=, pzk:l=,k=.
struct PassSpec {
  std::string name;
  std::map<std::string, int> params;
  std::string text;
};

// InvalidArgument on unknown passes, unknown or missing parameters.
PassSpec parse_pass(std::string_view text);

struct PipelineResult {
  Bcs bcs;                                   // last BCS stage
  std::shared_ptr<const TableauBcs> tableau; // set when a tableau/pzk pass ran last on the BCS
  std::optional<NonlocalGame> game;          // set once cc or cv ran
  std::vector<TransformReport> reports;
  std::vector<std::string> warnings;
};

// BCS passes (obliviate, tableau, pzk) must precede cc/cv; game passes
// (oracularize, repeat) must follow them. Errors carry the pass index.
PipelineResult run_pipeline(const Bcs& source, const std::vector<PassSpec>& passes);

// Rebuilds a game from the "builder" record written by game_to_json.
NonlocalGame game_from_json(const nlohmann::json& j);

}  // namespace zkgame
