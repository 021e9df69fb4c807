#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace uext {

/// Base of every domain error. `code()` is the stable identifier reported by
/// the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }
  virtual std::optional<std::size_t> position() const noexcept { return std::nullopt; }

 private:
  std::string code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& m) : Error("invalid-argument", m) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& m) : Error("dimension-mismatch", m) {}
};

class EndpointMismatch : public Error {
 public:
  explicit EndpointMismatch(const std::string& m) : Error("endpoint-mismatch", m) {}
};

class NotExact : public Error {
 public:
  explicit NotExact(const std::string& m) : Error("not-exact", m) {}
};

class UnsupportedInstance : public Error {
 public:
  explicit UnsupportedInstance(const std::string& m) : Error("unsupported-instance", m) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& m) : Error("budget-exceeded", m) {}
};

class NotAQuotient : public Error {
 public:
  explicit NotAQuotient(const std::string& m) : Error("not-a-quotient", m) {}
};

/// Thrown when a structural invariant that the theory guarantees fails to
/// hold, e.g. the three universality conditions disagree.
class InternalInconsistency : public Error {
 public:
  explicit InternalInconsistency(const std::string& m) : Error("internal-inconsistency", m) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& m, std::size_t offset)
      : Error("syntax-error", m + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::optional<std::size_t> position() const noexcept override { return offset_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace uext
