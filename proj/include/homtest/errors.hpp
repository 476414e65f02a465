#pragma once

#include <stdexcept>
#include <string>

namespace homtest {

// Operation applied outside its mathematical domain (wrong group kind, bad encoding, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size guard was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An adversary strategy broke the oracle protocol (over budget, wrong manipulation kind).
class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace homtest
