#pragma once

#include <stdexcept>
#include <string>

namespace sdet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature (or another iterative estimate) failed to reach the requested accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what + " (achieved relative estimate " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Determinants at two precisions disagree; carries the setting that should be tried next.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, long recommended_bits)
      : Error(what + "; retry with at least " + std::to_string(recommended_bits) + " bits"),
        recommended_bits_(recommended_bits) {}
  long recommended_bits() const noexcept { return recommended_bits_; }

 private:
  long recommended_bits_;
};

/// A symbol was evaluated exactly at one of its jump points.
class JumpError : public Error {
 public:
  using Error::Error;
};

/// A claimed even/odd/rotation symmetry does not hold.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// An integrand is not integrable (detected structurally or by divergence).
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

/// A sequence was read outside of the index range it was computed for.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// Input species does not match what an identity or study needs.
class SpeciesError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration; `path` is a JSON pointer to the offending node.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace sdet
