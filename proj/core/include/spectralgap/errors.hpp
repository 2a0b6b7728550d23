#pragma once

#include <stdexcept>
#include <string>

namespace spectralgap {

/// Input outside an operation's admissible set (bad (K,N), d > d_max, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Evaluation point outside a function's domain (tan singularity, s < a, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical procedure failed to deliver its contract (step limit, no
/// bracket, non-convergence, cross-method disagreement).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spectralgap
