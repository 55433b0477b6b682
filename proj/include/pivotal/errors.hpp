#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pivotal {

/// Error with a stable machine-readable code; the CLI surfaces it as JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& m) : Error("usage", m) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& m) : Error("bad-data", m) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error("domain", m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("config", m) {}
};

class UnsupportedSizeError : public Error {
 public:
  explicit UnsupportedSizeError(const std::string& m)
      : Error("unsupported-size", m) {}
};

/// Nonconvergence; carries the residual (e.g. KKT violation, last bracket).
class SolverError : public Error {
 public:
  SolverError(const std::string& m, double residual)
      : Error("solver", m), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_ = 0.0;
};

}  // namespace pivotal
