#pragma once

#include <stdexcept>
#include <string>

namespace gtqa {

// Error hierarchy. Every library failure derives from gtqa::Error so callers
// (the CLI in particular) can catch one type and report `kind()`.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error("invalid-parameter", what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension-mismatch", what) {}
};

class NotSymmetric : public Error {
 public:
  explicit NotSymmetric(const std::string& what) : Error("not-symmetric", what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error("convergence", what), achieved_(achieved) {}
  // Best accuracy reached before giving up (meaning depends on the thrower).
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class SearchFailure : public Error {
 public:
  explicit SearchFailure(const std::string& what) : Error("search-failure", what) {}
};

class DegenerateSpectrum : public Error {
 public:
  explicit DegenerateSpectrum(const std::string& what) : Error("degenerate", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace gtqa
