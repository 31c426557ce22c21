#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace esg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DiagKind {
  DuplicateEvent,
  UnknownEvent,
  CycleInCause,
  InconsistentSingleton,
  ConsistencyNotDownClosed,
  ImageNotConfiguration,
  LocalInjectivityViolation,
  NotTotal,
  PolarityMismatch,
  NeutralInGame,
  NotReceptive,
  PlusInnocenceViolation,
  MinusInnocenceViolation,
  TriangleBroken,
  StoppingNotPreserved,
  NotPlusReflecting,
  NotRigid,
  NotEpi,
  NotAConfiguration,
};

inline const char* to_string(DiagKind k) {
  switch (k) {
    case DiagKind::DuplicateEvent: return "DuplicateEvent";
    case DiagKind::UnknownEvent: return "UnknownEvent";
    case DiagKind::CycleInCause: return "CycleInCause";
    case DiagKind::InconsistentSingleton: return "InconsistentSingleton";
    case DiagKind::ConsistencyNotDownClosed: return "ConsistencyNotDownClosed";
    case DiagKind::ImageNotConfiguration: return "ImageNotConfiguration";
    case DiagKind::LocalInjectivityViolation: return "LocalInjectivityViolation";
    case DiagKind::NotTotal: return "NotTotal";
    case DiagKind::PolarityMismatch: return "PolarityMismatch";
    case DiagKind::NeutralInGame: return "NeutralInGame";
    case DiagKind::NotReceptive: return "NotReceptive";
    case DiagKind::PlusInnocenceViolation: return "PlusInnocenceViolation";
    case DiagKind::MinusInnocenceViolation: return "MinusInnocenceViolation";
    case DiagKind::TriangleBroken: return "TriangleBroken";
    case DiagKind::StoppingNotPreserved: return "StoppingNotPreserved";
    case DiagKind::NotPlusReflecting: return "NotPlusReflecting";
    case DiagKind::NotRigid: return "NotRigid";
    case DiagKind::NotEpi: return "NotEpi";
    case DiagKind::NotAConfiguration: return "NotAConfiguration";
  }
  return "?";
}

/// One violated axiom, with a human-readable witness.
struct Diagnostic {
  DiagKind kind;
  std::string witness;

  std::string str() const { return std::string(to_string(kind)) + "(" + witness + ")"; }
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has(const Diagnostics& ds, DiagKind k) {
  for (const auto& d : ds)
    if (d.kind == k) return true;
  return false;
}

class ValidationError : public Error {
 public:
  explicit ValidationError(Diagnostics diags)
      : Error(render(diags)), diags_(std::move(diags)) {}

  const Diagnostics& diagnostics() const { return diags_; }

 private:
  static std::string render(const Diagnostics& ds) {
    std::string out = "validation failed:";
    for (const auto& d : ds) out += " " + d.str() + ";";
    return out;
  }
  Diagnostics diags_;
};

class SizeBoundExceeded : public Error {
 public:
  SizeBoundExceeded(const std::string& what, std::size_t cap)
      : Error("size bound exceeded: " + what + " > " + std::to_string(cap)) {}
};

class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class UnknownEvent : public Error {
 public:
  explicit UnknownEvent(const std::string& name) : Error("unknown event: " + name) {}
};

class GameMismatch : public Error {
 public:
  using Error::Error;
};

class NotAGap : public Error {
 public:
  using Error::Error;
};

class NotRaceFree : public Error {
 public:
  using Error::Error;
};

/// Size caps shared by the enumerating operations.
struct Limits {
  std::size_t max_configs = std::size_t{1} << 20;
  std::size_t max_primes = 4096;
  std::size_t max_test_size = 4;
};

}  // namespace esg
