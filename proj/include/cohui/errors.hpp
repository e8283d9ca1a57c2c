#pragma once

#include <stdexcept>
#include <string>

namespace cohui {

// Mode or detector index outside the circuit.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Mismatched register length, matrix dimension or pattern width.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Objective is identically zero, so no optimum exists.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested photon number lies beyond the Fock cutoff.
class CutoffError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace cohui
