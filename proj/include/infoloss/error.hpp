#ifndef INFOLOSS_ERROR_HPP
#define INFOLOSS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace infoloss {

/// Invalid distribution, system, or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed numeric input (non-finite points, empty counts).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Fewer reliable rows than a regression needs.
class InsufficientDataError : public std::runtime_error {
 public:
  explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

/// Relative loss requested for an input whose information dimension is ~0.
class UndefinedRelativeLossError : public std::runtime_error {
 public:
  explicit UndefinedRelativeLossError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace infoloss

#endif  // INFOLOSS_ERROR_HPP
