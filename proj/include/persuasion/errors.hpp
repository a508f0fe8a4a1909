#pragma once

#include <stdexcept>
#include <string>

namespace persuasion {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidMatrix : Error {
  using Error::Error;
};

struct NotPsd : Error {
  using Error::Error;
};

struct DimError : Error {
  using Error::Error;
};

struct SingularReceiver : Error {
  using Error::Error;
};

struct InfeasiblePosterior : Error {
  using Error::Error;
};

struct NotAchievable : Error {
  using Error::Error;
};

struct InvalidScaling : Error {
  using Error::Error;
};

struct TooManyOrderings : Error {
  using Error::Error;
};

struct InvalidWeights : Error {
  using Error::Error;
};

struct NoUniqueReceiverNash : Error {
  using Error::Error;
};

struct DegeneratePrior : Error {
  using Error::Error;
};

/// Scenario file parse or validation failure. Carries the path of the
/// offending field so config mistakes are locatable.
struct ScenarioError : Error {
  ScenarioError(const std::string& field_path, const std::string& reason)
      : Error(field_path + ": " + reason), field(field_path) {}
  std::string field;
};

}  // namespace persuasion
