#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rashomon {

// Base for every error raised by the library. Callers that only care about
// "something went wrong" catch this; the CLI and service map subclasses to
// exit codes and HTTP statuses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& msg, std::size_t row, std::size_t column)
      : Error(msg), row_(row), column_(column) {}
  explicit ValidationError(const std::string& msg) : Error(msg) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_ = 0;
  std::size_t column_ = 0;
};

class SchemaError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class OracleScopeError : public Error { using Error::Error; };
class EmptySetError : public Error { using Error::Error; };
class PrefixNotFound : public Error { using Error::Error; };
class InvalidDepth : public Error { using Error::Error; };
class UnknownFeature : public Error { using Error::Error; };
class UnsupportedVersion : public Error { using Error::Error; };

class UnknownTreeId : public Error {
 public:
  explicit UnknownTreeId(std::int64_t id)
      : Error("unknown tree id " + std::to_string(id)), id_(id) {}
  std::int64_t id() const { return id_; }

 private:
  std::int64_t id_;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t budget, std::uint64_t estimate)
      : Error("search exceeded node budget of " + std::to_string(budget) +
              " (estimated state space " + std::to_string(estimate) + ")"),
        budget_(budget),
        estimate_(estimate) {}

  std::uint64_t budget() const { return budget_; }
  std::uint64_t estimate() const { return estimate_; }

 private:
  std::uint64_t budget_;
  std::uint64_t estimate_;
};

}  // namespace rashomon
