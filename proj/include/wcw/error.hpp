#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>

namespace wcw {

enum class ErrorKind {
  Dimension,
  Domain,
  Capacity,
  Precondition,
  Divergence,
  NotConverged,
  Singular,
  NotFound,
  InsufficientRange,
  Config,
  Io,
  Format,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library. The detail map carries the numbers a
// caller needs to act on the error (lengths, gaps, iteration indices, ...).
class Error : public std::runtime_error {
 public:
  using Detail = std::variant<double, long long, std::string>;

  Error(ErrorKind kind, const std::string& message,
        std::map<std::string, Detail> details = {})
      : std::runtime_error(message), kind_(kind), details_(std::move(details)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::map<std::string, Detail>& details() const noexcept { return details_; }

 private:
  ErrorKind kind_;
  std::map<std::string, Detail> details_;
};

}  // namespace wcw
