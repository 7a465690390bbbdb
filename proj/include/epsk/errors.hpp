#ifndef EPSK_ERRORS_HPP
#define EPSK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace epsk {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SvdFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace epsk

#endif  // EPSK_ERRORS_HPP
