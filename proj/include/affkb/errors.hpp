#pragma once

#include <stdexcept>
#include <string>

namespace affkb {

// Base for all toolkit errors that carry a stable machine-parsable code
// (the CLI prints "error: <code>: <message>" and maps codes to exit codes).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& message) : Error("input", message) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error("usage", message) {}
};

class EmptyCorpusError : public Error {
 public:
  explicit EmptyCorpusError(const std::string& message)
      : Error("empty-corpus", message) {}
};

class UnknownEntityError : public Error {
 public:
  explicit UnknownEntityError(const std::string& name)
      : Error("unknown-entity", "unknown entity: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

}  // namespace affkb
