#pragma once

#include <stdexcept>
#include <string>

namespace graphspn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural or numerical problem with a sum-product network or its evidence.
class SpnError : public Error {
 public:
  using Error::Error;
};

// Malformed or invariant-violating input data (graphs, datasets, model files).
class DataError : public Error {
 public:
  using Error::Error;
};

// Bad configuration values or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphspn
