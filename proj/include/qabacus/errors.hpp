#pragma once

#include <stdexcept>
#include <string>

namespace qabacus {

/// A request that is well-formed but outside what the physics supports,
/// e.g. asking the modal engine to evolve under a gate with a length scale.
class ContractError : public std::domain_error {
 public:
  explicit ContractError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed input files or gate descriptions.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// The grid engine detected that its discretisation is not resolving the run.
class AccuracyError : public std::runtime_error {
 public:
  explicit AccuracyError(const std::string& what, double discrepancy)
      : std::runtime_error(what), discrepancy_(discrepancy) {}
  double discrepancy() const noexcept { return discrepancy_; }

 private:
  double discrepancy_;
};

}  // namespace qabacus
