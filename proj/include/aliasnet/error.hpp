#pragma once

#include <stdexcept>
#include <string>

namespace aliasnet {

enum class ErrorKind {
  Argument,
  Dimension,
  Format,
  Io,
  Training,
  Solver,
  Nondeterminism,
};

/// Base of every exception thrown by the core. The C API maps `kind()` onto
/// its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(ErrorKind::Argument, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorKind::Dimension, what) {}
};

/// Malformed or truncated file. `offset` is the byte position where decoding
/// stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(ErrorKind::Format, what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int epoch)
      : Error(ErrorKind::Training, what + " (epoch " + std::to_string(epoch) + ")"),
        epoch_(epoch) {}

  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(ErrorKind::Solver, what) {}
};

class NondeterminismError : public Error {
 public:
  explicit NondeterminismError(const std::string& what)
      : Error(ErrorKind::Nondeterminism, what) {}
};

}  // namespace aliasnet
