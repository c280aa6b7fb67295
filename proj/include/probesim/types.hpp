#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace probesim {

/// Dense node id in [0, n).
using NodeId = std::uint32_t;

/// Original (user-facing) node label as read from an edge list.
using Label = std::uint64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// A numeric argument violates an operation's precondition.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Structurally invalid input to an operation (bad walk prefix, source mismatch).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed edge-list or score file.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A configured work or memory guard was exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace probesim
