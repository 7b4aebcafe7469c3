#pragma once

#include <stdexcept>
#include <string>

namespace snvec {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
  using Error::Error;
};

class InvalidPartition : public Error {
public:
  using Error::Error;
};

/// A matrix or vector failed one of the state invariants (Hermiticity,
/// trace, positivity, normalization, rank).
class ValidationError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Every candidate was excluded. Either the input is not a state or a
/// criterion is unsound.
class Inconsistency : public Error {
public:
  using Error::Error;
};

}  // namespace snvec
