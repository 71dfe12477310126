#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mimic {

// Every failure raised by the library derives from Error. The category tells
// the CLI which exit status to use.
enum class ErrorCategory {
  Usage,     // bad flags / config values
  Data,      // malformed input files, label problems, size mismatches
  Contract,  // schema mismatch, state preconditions violated by the caller
  Training,  // a classifier could not be fitted
  Storage,   // model files: I/O, version, integrity
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCategory::Data,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class LabelError : public Error {
 public:
  explicit LabelError(const std::string& what) : Error(ErrorCategory::Data, what) {}
};

class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(ErrorCategory::Data, what) {}
};

class StateError : public Error {
 public:
  explicit StateError(const std::string& what) : Error(ErrorCategory::Contract, what) {}
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorCategory::Contract, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::Usage, what) {}
};

class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& what) : Error(ErrorCategory::Training, what) {}
};

class SelectionError : public Error {
 public:
  explicit SelectionError(const std::string& what) : Error(ErrorCategory::Training, what) {}
};

class StorageError : public Error {
 public:
  explicit StorageError(const std::string& what) : Error(ErrorCategory::Storage, what) {}
};

class VersionError : public Error {
 public:
  explicit VersionError(const std::string& what) : Error(ErrorCategory::Storage, what) {}
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what) : Error(ErrorCategory::Storage, what) {}
};

}  // namespace mimic
