#pragma once

// Exception types shared by every hkl module. All derive from hkl::Error so
// callers can catch the family at once.

#include <stdexcept>
#include <string>

namespace hkl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Laurent value with genuine half powers was evaluated as a point count.
class NonIntegralExponent : public Error {
 public:
  using Error::Error;
};

class NonFiniteType : public Error {
 public:
  using Error::Error;
};

class GroupTooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidCartan : public Error {
 public:
  using Error::Error;
};

class NotReduced : public Error {
 public:
  using Error::Error;
};

// Hecke extraction produced something that is not an integer polynomial.
class NonPolynomialR : public Error {
 public:
  using Error::Error;
};

class NotComparable : public Error {
 public:
  using Error::Error;
};

class IntervalTooLarge : public Error {
 public:
  using Error::Error;
};

class NegativeCoefficient : public Error {
 public:
  using Error::Error;
};

class ValidationFailure : public Error {
 public:
  using Error::Error;
};

// Malformed user input: bad word syntax, bad polynomial text, bad table rows.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hkl
