#pragma once

#include <stdexcept>
#include <string>

namespace gwk {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SingularityError : std::runtime_error {
  int term;
  SingularityError(const std::string& what, int term_index)
      : std::runtime_error(what), term(term_index) {}
};

struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dt too large, divergence, singular quadrature
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gwk
