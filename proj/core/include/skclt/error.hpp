#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace skclt {

// Every library error carries a stable machine-readable code; the CLI
// serializes it into the error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message) : Error("invalid_argument", message) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message) : Error("dimension_mismatch", message) {}
};

// Raised when an exact computation would exceed its enumeration ceiling.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& message, int requested, int ceiling)
      : Error("capacity_exceeded", message), requested_(requested), ceiling_(ceiling) {}

  int requested() const noexcept { return requested_; }
  int ceiling() const noexcept { return ceiling_; }

 private:
  int requested_;
  int ceiling_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double last_iterate, int iterations)
      : Error("no_convergence", message), last_iterate_(last_iterate), iterations_(iterations) {}

  double last_iterate() const noexcept { return last_iterate_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_iterate_;
  int iterations_;
};

// Cached Markov-chain state drifted away from a from-scratch recomputation.
class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& message) : Error("integrity", message) {}
};

// A per-disorder evaluation failed; records which disorder index.
class DisorderEvaluationError : public Error {
 public:
  DisorderEvaluationError(const std::string& inner_code, const std::string& message, long index)
      : Error(inner_code, message), index_(index) {}

  long index() const noexcept { return index_; }

 private:
  long index_;
};

// Configuration problems are collected, not reported one at a time.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error("invalid_config", join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace skclt
