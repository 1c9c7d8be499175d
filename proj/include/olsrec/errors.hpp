#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace olsrec {

// Numerical failures map to CLI exit code 2, usage/input failures to 1.
enum class ErrorKind { Numerical, Input };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class RankDeficient : public Error {
public:
  explicit RankDeficient(double sigma)
      : Error(ErrorKind::Numerical,
              "rank-deficient matrix (smallest singular value " +
                  std::to_string(sigma) + ")"),
        sigma_(sigma) {}

  double sigma() const noexcept { return sigma_; }

private:
  double sigma_;
};

class DegenerateColumn : public Error {
public:
  explicit DegenerateColumn(std::size_t index)
      : Error(ErrorKind::Numerical,
              "column " + std::to_string(index) +
                  " lies in the span of the selected columns"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

class NoViableCandidate : public Error {
public:
  NoViableCandidate()
      : Error(ErrorKind::Numerical, "no viable candidate column remains") {}
};

class Indeterminate : public Error {
public:
  Indeterminate()
      : Error(ErrorKind::Numerical,
              "selection ratio indeterminate: remaining true columns are "
              "orthogonal to the residual") {}
};

class ConditionInapplicable : public Error {
public:
  explicit ConditionInapplicable(const std::string& what)
      : Error(ErrorKind::Numerical, what) {}
};

class InvalidInstance : public Error {
public:
  explicit InvalidInstance(const std::string& what)
      : Error(ErrorKind::Input, "invalid instance: " + what) {}
};

class InvalidDecomposition : public Error {
public:
  explicit InvalidDecomposition(const std::string& what)
      : Error(ErrorKind::Input, "invalid decomposition: " + what) {}
};

class TooLarge : public Error {
public:
  explicit TooLarge(double combinations)
      : Error(ErrorKind::Input, "exhaustive search over " +
                                    std::to_string(combinations) +
                                    " supports exceeds the limit") {}
};

class InvalidParam : public Error {
public:
  explicit InvalidParam(const std::string& what)
      : Error(ErrorKind::Input, "invalid parameter: " + what) {}
};

class BudgetExceeded : public Error {
public:
  explicit BudgetExceeded(const std::string& what)
      : Error(ErrorKind::Input, "budget exceeded: " + what) {}
};

class InvalidExperiment : public Error {
public:
  explicit InvalidExperiment(const std::string& what)
      : Error(ErrorKind::Input, "invalid experiment: " + what) {}
};

}  // namespace olsrec
