#pragma once

#include <stdexcept>
#include <string>

namespace rxlink {

/// Argument outside the mathematical domain of a model (negative width,
/// non-positive input swing, wrong load variant for an operation).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or missing field in a configuration document.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Well-formed configuration whose values break a model invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested operating point lies beyond what the block can deliver.
/// `achievable` carries the best the block can do (bandwidth, loss, ...).
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, double achievable)
      : std::runtime_error(what), achievable_(achievable) {}

  double achievable() const noexcept { return achievable_; }

 private:
  double achievable_;
};

/// Iterative numeric routine failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double best_estimate,
               double achieved_tolerance)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        achieved_tolerance_(achieved_tolerance) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double best_estimate_;
  double achieved_tolerance_;
};

}  // namespace rxlink
