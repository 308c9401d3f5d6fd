#pragma once

#include <stdexcept>
#include <string>

namespace sst {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (e.g. a non-horizontal tangent).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of a map (non-SPD matrix, zero scale, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient or otherwise degenerate geometric data.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Two points are too far apart for a logarithm or transport to be defined.
class NeighborhoodError : public Error {
 public:
  using Error::Error;
};

/// Malformed files, manifests, or command-line values.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_norm)
      : Error(what), last_norm_(last_norm) {}

  double last_norm() const noexcept { return last_norm_; }

 private:
  double last_norm_;
};

}  // namespace sst
