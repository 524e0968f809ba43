#pragma once

#include <stdexcept>
#include <string>

namespace alliance {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or argument. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (schedule rows, partition files, caches). CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

// An exhaustive routine was asked to run beyond its size cap. CLI exit code 4.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

// Inputs that were produced for a different graph, or a broken invariant.
class IntegrityError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace alliance
