#pragma once

#include <stdexcept>
#include <string>

namespace fsir {

// Bad input shape, range, or grid mismatch.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operator whose leading eigenvalue is not positive.
class DegenerateOperator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Factorization or solve failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linearly dependent inputs where independence is required.
class RankDeficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A projected signal with zero variance.
class DegenerateSignal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file is readable but does not have the expected columns or values.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fsir
