#pragma once

#include <stdexcept>
#include <string>

namespace genreads {

// Base class for all engine errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data: out-of-range bids, non-simplex columns, NaN entries.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Mismatched shapes or taxonomies between inputs.
class DimensionError : public ValidationError {
 public:
  explicit DimensionError(const std::string& what) : ValidationError(what) {}
};

// A caller-supplied parameter is out of its documented range.
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(what) {}
};

// A theoretical bound failed during verification.
class BoundViolation : public Error {
 public:
  explicit BoundViolation(const std::string& what) : Error(what) {}
};

// An external signal provider (judge endpoint, embedding file) misbehaved.
// Carries the raw payload for diagnosis.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, std::string payload = {})
      : Error(what), payload_(std::move(payload)) {}
  const std::string& payload() const { return payload_; }

 private:
  std::string payload_;
};

}  // namespace genreads
