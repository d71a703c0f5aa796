#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ontoscen {

enum class ErrorCode {
  // names / structure
  DuplicateName,
  UnknownParent,
  CycleDetected,
  UnknownClass,
  UnknownName,
  KindMismatch,
  BadName,
  // assertions
  DomainViolation,
  RangeViolation,
  DuplicateAssertion,
  BadLiteral,
  // serialization / manifests
  SyntaxError,
  InvariantViolation,
  ManifestCorrupt,
  DuplicateAsset,
  // builder
  BadParentKind,
  MissingPayload,
  AssetKindMismatch,
  DuplicateEgo,
  UnknownEntity,
  MissingDynamics,
  UnknownRule,
  UnknownElementRef,
  EmptyConditions,
  BadAttachTarget,
  RangeError,
  InvalidPair,
  // fusion
  TownMismatch,
  EgoConflict,
  InputInvalid,
  // lowering
  UnloweredIndividual,
  // sensor effects
  DimensionMismatch,
  BadGain,
  EmptyMask,
  // io
  IoError,
};

const char* to_string(ErrorCode code);

// General failure carrying a machine-checkable code plus human context.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

// One broken well-formedness rule in a scenario ontology.
struct RuleViolation {
  int rule = 0;              // 1..8
  std::string rule_id;       // e.g. "storyboard-shape"
  std::string individual;    // offending individual
  std::string detail;
};

// Thrown when an operation requires a valid scenario but validation failed.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<RuleViolation> violations)
      : std::runtime_error(format(violations)), violations_(std::move(violations)) {}

  const std::vector<RuleViolation>& violations() const { return violations_; }

private:
  static std::string format(const std::vector<RuleViolation>& violations);
  std::vector<RuleViolation> violations_;
};

}  // namespace ontoscen
