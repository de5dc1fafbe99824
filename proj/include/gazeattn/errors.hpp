#pragma once

#include <stdexcept>
#include <string>

namespace gazeattn {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- vision ---
class InvalidImage : public Error {
 public:
  using Error::Error;
};
class FactorOutOfRange : public Error {
 public:
  using Error::Error;
};

// --- datasets ---
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, int line)
      : Error("missing or invalid field \"" + field + "\" (line " +
              std::to_string(line) + ")"),
        field_(field),
        line_(line) {}
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};
class EmptyManifest : public Error {
 public:
  using Error::Error;
};
class UnknownSubject : public Error {
 public:
  using Error::Error;
};
class TooFewSubjects : public Error {
 public:
  using Error::Error;
};
class FrameReadError : public Error {
 public:
  FrameReadError(const std::string& locator, long long index)
      : Error("cannot read frame " + std::to_string(index) + " of " + locator),
        index_(index) {}
  long long index() const { return index_; }

 private:
  long long index_;
};
class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

// --- model ---
class UnknownArchitecture : public Error {
 public:
  using Error::Error;
};
class InvalidConfig : public Error {
 public:
  using Error::Error;
};
class EmptyDataset : public Error {
 public:
  using Error::Error;
};
class DivergenceError : public Error {
 public:
  using Error::Error;
};
class IncompatibleCheckpoint : public Error {
 public:
  using Error::Error;
};
class ShapeError : public Error {
 public:
  using Error::Error;
};
class VersionMismatch : public Error {
 public:
  using Error::Error;
};
class CorruptCheckpoint : public Error {
 public:
  using Error::Error;
};

// --- eval ---
class LengthMismatch : public Error {
 public:
  using Error::Error;
};
class EmptyInput : public Error {
 public:
  using Error::Error;
};
class EmptyMatrix : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

// --- cli ---
class UnknownCommand : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& key, const std::string& detail = "")
      : Error("config error for \"" + key + "\"" +
              (detail.empty() ? "" : ": " + detail)),
        key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace gazeattn
