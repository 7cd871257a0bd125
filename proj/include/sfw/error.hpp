#pragma once

#include <stdexcept>
#include <string>

namespace sfw {

// Base of every error raised by the library. Callers that only care about
// "something went wrong" catch this; the subclasses name the contract that
// was broken.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PointOutOfBounds : public Error {
 public:
  using Error::Error;
};

class InvalidLevel : public Error {
 public:
  using Error::Error;
};

class MalformedGid : public Error {
 public:
  using Error::Error;
};

class DictionaryFull : public Error {
 public:
  using Error::Error;
};

// Path handed to a prefix tree is not sorted by the tree's word order.
class OrderViolation : public Error {
 public:
  using Error::Error;
};

class UnknownWord : public Error {
 public:
  using Error::Error;
};

class UnknownEntry : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

}  // namespace sfw
