#pragma once

#include <stdexcept>
#include <string>

namespace srp {

// Failure classes. The CLI maps each class onto a process exit code.
enum class ErrorKind {
  parameter,        // invalid input value or malformed file
  domain,           // argument outside the function's domain
  consistency,      // dangling reference to a point that does not exist
  structure,        // malformed permutation or gas
  boundary,         // boundary condition clashes with the volume
  divergence,       // series cannot be certified to converge
  cap_exceeded,     // enumeration would exceed a size cap
  window_too_small, // a clan of ancestors leaves the generated window
  nontermination,   // window doublings exhausted
  contract,         // internal invariant or oracle contract breached
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

// 0 ok, 2 bad input (parameter, domain, consistency, structure, boundary,
// divergence), 3 cap exceeded, 4 nontermination, 5 internal contract.
int exit_code(ErrorKind kind) noexcept;

}  // namespace srp
