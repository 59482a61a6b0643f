#pragma once

#include <stdexcept>
#include <string>

namespace mobidesc {

// Base for every error thrown by the library. Protocol-level outcomes that a
// caller is expected to handle inline (WrongLocation, Offline, NotHosted) are
// modelled as result statuses, not exceptions; see registry/client headers.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// --- document model ---
class SchemaViolation : public Error {
public:
  using Error::Error;
};

class InvalidValue : public Error {
public:
  using Error::Error;
};

class NotFound : public Error {
public:
  using Error::Error;
};

// --- codec ---
class MalformedXml : public Error {
public:
  using Error::Error;
};

class BadTimestamp : public Error {
public:
  using Error::Error;
};

class NotFunctional : public Error {
public:
  using Error::Error;
};

class InvalidDocument : public Error {
public:
  using Error::Error;
};

// --- registry ---
class InvalidFunctional : public Error {
public:
  using Error::Error;
};

class MalformedEndpoint : public Error {
public:
  using Error::Error;
};

class InvalidQuery : public Error {
public:
  using Error::Error;
};

// --- provider agent ---
class InvalidBundle : public Error {
public:
  using Error::Error;
};

class NotHostedError : public Error {
public:
  using Error::Error;
};

// --- consumer resolver ---
class RegistryUnreachable : public Error {
public:
  using Error::Error;
};

class FunctionalMissing : public Error {
public:
  using Error::Error;
};

class KindMismatch : public Error {
public:
  using Error::Error;
};

class ServiceMismatch : public Error {
public:
  using Error::Error;
};

class ClockSkew : public Error {
public:
  using Error::Error;
};

// --- harness ---
class ConfigError : public Error {
public:
  using Error::Error;
};

class FixtureError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace mobidesc
