#pragma once

#include <stdexcept>
#include <string>

namespace rovib {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent user configuration (unknown state label, bad field).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Physical precondition violated (T <= 0, negative quantum number, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A numerical grid is too coarse for the requested accuracy.
class ResolutionError : public Error {
public:
  using Error::Error;
};

/// A Raman line falls outside the sampled two-photon spectrum.
class OutOfBandError : public Error {
public:
  using Error::Error;
};

}  // namespace rovib
