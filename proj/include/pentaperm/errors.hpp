#pragma once

#include <stdexcept>
#include <string>

namespace pentaperm {

enum class Errc {
  RedPolyReducible,
  UnsupportedDegree,
  ZeroInverse,
  ModulusReducible,
  ZeroInput,
  ZeroConstant,
  DegenerateLinearTerm,
  NotSquarefree,
  FieldTooLarge,
  BothZero,
  DegreeZeroInput,
  MissingParams,
  ExternalCondition,
  ConstructionFailed,
  FieldMismatch,
  GuardAlwaysVanishes,
  ParseError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::RedPolyReducible: return "RedPolyReducible";
    case Errc::UnsupportedDegree: return "UnsupportedDegree";
    case Errc::ZeroInverse: return "ZeroInverse";
    case Errc::ModulusReducible: return "ModulusReducible";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::ZeroConstant: return "ZeroConstant";
    case Errc::DegenerateLinearTerm: return "DegenerateLinearTerm";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::BothZero: return "BothZero";
    case Errc::DegreeZeroInput: return "DegreeZeroInput";
    case Errc::MissingParams: return "MissingParams";
    case Errc::ExternalCondition: return "ExternalCondition";
    case Errc::ConstructionFailed: return "ConstructionFailed";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::GuardAlwaysVanishes: return "GuardAlwaysVanishes";
    case Errc::ParseError: return "ParseError";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pentaperm
