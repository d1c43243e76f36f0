#pragma once

#include <stdexcept>
#include <string>

namespace csflab {

struct DegenerateCurve : std::runtime_error {
  explicit DegenerateCurve(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParams : std::invalid_argument {
  explicit InvalidParams(const std::string& what) : std::invalid_argument(what) {}
};

struct IdentityUnavailable : std::runtime_error {
  explicit IdentityUnavailable(const std::string& what)
      : std::runtime_error(what) {}
};

struct InsufficientData : std::runtime_error {
  explicit InsufficientData(const std::string& what)
      : std::runtime_error(what) {}
};

struct UndefinedForZeroTau : std::domain_error {
  explicit UndefinedForZeroTau(const std::string& what)
      : std::domain_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csflab
