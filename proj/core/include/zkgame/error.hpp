#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zkgame {

// Every failure the library reports carries one of these codes.
enum class Errc {
  kMissingVariable,
  kScopeTooLarge,
  kParseError,
  kTooLarge,
  kAsymmetricGame,
  kMissingConditional,
  kUnsupportedGate,
  kBadRows,
  kBadParams,
  kNotPerfect,
  kVarNotInScope,
  kDimensionMismatch,
  kNotAWitness,
  kUnknownQuestion,
  kSpaceMismatch,
  kNotOblivious,
  kParamsTooSmall,
  kUnsupportedQuestion,
  kInvalidArgument,
};

inline std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error(Errc::kParseError,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kMissingVariable: return "MissingVariable";
    case Errc::kScopeTooLarge: return "ScopeTooLarge";
    case Errc::kParseError: return "ParseError";
    case Errc::kTooLarge: return "TooLarge";
    case Errc::kAsymmetricGame: return "AsymmetricGame";
    case Errc::kMissingConditional: return "MissingConditional";
    case Errc::kUnsupportedGate: return "UnsupportedGate";
    case Errc::kBadRows: return "BadRows";
    case Errc::kBadParams: return "BadParams";
    case Errc::kNotPerfect: return "NotPerfect";
    case Errc::kVarNotInScope: return "VarNotInScope";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kNotAWitness: return "NotAWitness";
    case Errc::kUnknownQuestion: return "UnknownQuestion";
    case Errc::kSpaceMismatch: return "SpaceMismatch";
    case Errc::kNotOblivious: return "NotOblivious";
    case Errc::kParamsTooSmall: return "ParamsTooSmall";
    case Errc::kUnsupportedQuestion: return "UnsupportedQuestion";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace zkgame
