#pragma once

#include <stdexcept>
#include <string>

namespace hai {

// x outside a function's domain window.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// (p, c) pair violates the growth bound or another model precondition.
class AdmissibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// p'(x) = 0 while p''(x) != 0.
class UndefinedAraError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class FlatRegionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedClassificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateStatesError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A grid is too coarse for the requested detection.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad configuration; path() is a JSON pointer to the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace hai
