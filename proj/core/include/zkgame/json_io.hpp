#pragma once

#include <nlohmann/json.hpp>

#include "zkgame/bcs.hpp"
#include "zkgame/circuit.hpp"
#include "zkgame/game.hpp"
#include "zkgame/rational.hpp"
#include "zkgame/referee.hpp"

namespace zkgame {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// {"num": n, "den": d}; numbers beyond 64 bits are written as strings.
json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

// {"op":"var","var":i} | {"op":"const","value":bool} | {"op":"not","arg":c}
// | {"op":"and"|"or"|"xor","args":[l,r]}
json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const json& j);

// {"n", "constraints":[{"vars", "table"|"circuit"|"s5"}], "names"?, "groups"?, "c_max"}
json bcs_to_json(const Bcs& b);
// ParseError (line 0) on malformed input; the result is validated.
Bcs bcs_from_json(const json& j);

// Questions, mu and the builder record. Predicates are not stored: the
// builder (source BCS plus pass list) reconstructs the game.
json game_to_json(const NonlocalGame& g);

json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const json& j);

}  // namespace zkgame
