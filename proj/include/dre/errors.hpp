#pragma once

#include <stdexcept>

namespace dre {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// Requested gamma violates the gamma < 1/L_f hypothesis.
class GammaTooLarge : public Error {
 public:
  using Error::Error;
};

class StronglyConvexRequired : public Error {
 public:
  using Error::Error;
};

class LambdaOutOfRange : public Error {
 public:
  using Error::Error;
};

class NonpositiveLipschitz : public Error {
 public:
  using Error::Error;
};

class BadParameters : public Error {
 public:
  using Error::Error;
};

class CertificateFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace dre
