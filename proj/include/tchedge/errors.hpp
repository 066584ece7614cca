#pragma once

#include <stdexcept>
#include <string>

namespace tchedge {

/// Malformed user input: files, CLI vectors, ill-posed LP descriptions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was invoked outside its stated domain.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal invariant breach; indicates a bug, not a user mistake.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tchedge
