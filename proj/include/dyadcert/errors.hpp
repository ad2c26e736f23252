#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dyadcert {

// Malformed document, wrong arity, out-of-range argument. CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stated hypothesis of an operation does not hold for the given input.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

// normalize() below the minimal level of a set.
class LevelError : public InputError {
 public:
  LevelError(const std::string& what, unsigned minimal_level)
      : InputError(what), minimal_level_(minimal_level) {}
  unsigned minimal_level() const { return minimal_level_; }

 private:
  unsigned minimal_level_;
};

// A computation ran and the checked property failed (CLI exit code 1),
// e.g. a context prefix that has no admissible index.
class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScaleReport {
  std::string reason;
  unsigned required_level = 0;
  unsigned max_level = 0;
  // n_zero(t, eta) when the refusal came from it, 0 otherwise.
  unsigned n_zero = 0;
  // Bytes for one atom mask at required_level.
  std::uint64_t bytes_per_set = 0;
};

// Refusal to build masks beyond the configured level cap. CLI exit code 3.
class ScaleError : public std::runtime_error {
 public:
  explicit ScaleError(ScaleReport report)
      : std::runtime_error(report.reason), report_(std::move(report)) {}
  const ScaleReport& report() const { return report_; }

 private:
  ScaleReport report_;
};

// Level cap for mask allocation. Default 22 (8 Mi atoms, 1 MiB per set).
unsigned max_level();
void set_max_level(unsigned level);
// Throws ScaleError if a mask at `level` would exceed the cap.
void RequireLevel(unsigned level, const std::string& what);

}  // namespace dyadcert
