#ifndef JOS_ERRORS_HPP
#define JOS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jos {

// Invalid input values (non-finite parameters, omega <= 0, ...).
class domain_error : public std::invalid_argument {
  public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// The integrator ran out of its evaluation budget.
class budget_error : public std::runtime_error {
  public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to converge or is undefined at the input
// (pivot vanishing in a decomposition, q-point extraction failure, ...).
class numerics_error : public std::runtime_error {
  public:
    explicit numerics_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace jos

#endif
