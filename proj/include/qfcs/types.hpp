#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qfcs {

using Complex = std::complex<double>;

/// A projective measurement conditioned on an outcome of (near-)zero
/// probability. Callers that retry (rejection sampling) catch this.
class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The quantum filter (or a g-factor normalization) left no surviving weight.
class AnnihilationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A per-sector reference probability was unusable during distribution
/// reconstruction.
class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config-file syntax or validation failure. line == 0 means "not tied to a
/// specific line".
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

}  // namespace qfcs
