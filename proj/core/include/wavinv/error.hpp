#pragma once

#include <stdexcept>
#include <string>

namespace wavinv {

// Base of every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& m) : Error("shape", m) {}
};
struct ParameterError : Error {
  explicit ParameterError(const std::string& m) : Error("parameter", m) {}
};
struct LevelError : Error {
  explicit LevelError(const std::string& m) : Error("level", m) {}
};
struct InvalidStencilError : Error {
  explicit InvalidStencilError(const std::string& m) : Error("invalid_stencil", m) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error("domain", m) {}
};
struct CompatibilityError : Error {
  explicit CompatibilityError(const std::string& m) : Error("compatibility", m) {}
};
struct InvariantError : Error {
  explicit InvariantError(const std::string& m) : Error("invariant", m) {}
};
struct DegeneracyError : Error {
  explicit DegeneracyError(const std::string& m) : Error("degeneracy", m) {}
};
struct SpecError : Error {
  explicit SpecError(const std::string& m) : Error("spec", m) {}
};
struct ConfigError : Error {
  ConfigError(std::string key, const std::string& m)
      : Error("config", key.empty() ? m : key + ": " + m), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error("io", m) {}
};

// Raised when the multilevel solver exhausts its V-cycle budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& m, double last_residual)
      : Error("convergence", m), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace wavinv
