#pragma once

#include <stdexcept>
#include <string>

namespace optdesign {

/// Malformed textual input (design files, graph6 lines, point files).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Input is well formed but violates an operation's precondition
/// (disconnected design, inconsistent parameters, size limits).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace optdesign
