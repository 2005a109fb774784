#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qhi {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Iterative routine failed to converge or failed its residual check.
class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// A metric denominator vanished; `which` names the EP family ("+-1" or "+-1/lambda").
class MetricSingularity : public Error {
 public:
  MetricSingularity(const std::string& what, std::string which)
      : Error(what), which_(std::move(which)) {}
  const std::string& which() const noexcept { return which_; }

 private:
  std::string which_;
};

class InvalidMetric : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class ConstraintViolation : public Error {
 public:
  ConstraintViolation(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// No clear cut in the singular spectrum of the constraint operator.
class RankAmbiguity : public Error {
 public:
  RankAmbiguity(const std::string& what, std::vector<double> singular_values)
      : Error(what), singular_values_(std::move(singular_values)) {}
  const std::vector<double>& singular_values() const noexcept { return singular_values_; }

 private:
  std::vector<double> singular_values_;
};

class NoEpInBracket : public Error {
 public:
  using Error::Error;
};

class AmbiguousEp : public Error {
 public:
  AmbiguousEp(const std::string& what, double first_kind_candidate, double second_kind_candidate)
      : Error(what), first_(first_kind_candidate), second_(second_kind_candidate) {}
  double first_kind_candidate() const noexcept { return first_; }
  double second_kind_candidate() const noexcept { return second_; }

 private:
  double first_;
  double second_;
};

}  // namespace qhi
