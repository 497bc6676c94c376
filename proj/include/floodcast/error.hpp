#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace floodcast {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Normal-equation matrix stayed rank deficient after the ridge retry.
class SingularSystem : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NonFinite : public Error {
public:
  using Error::Error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

class ZeroTotalWeight : public Error {
public:
  ZeroTotalWeight() : Error("merge weights sum to zero") {}
};

class InsufficientHistory : public Error {
public:
  InsufficientHistory(std::size_t have, std::size_t need)
      : Error("insufficient history: have " + std::to_string(have) +
              " rows, need " + std::to_string(need)),
        have_(have), need_(need) {}
  std::size_t have() const { return have_; }
  std::size_t need() const { return need_; }

private:
  std::size_t have_;
  std::size_t need_;
};

class CorruptedReading : public Error {
public:
  CorruptedReading() : Error("reading payload is corrupted") {}
};

/// CSV ingestion failure; line and column are 1-based.
class ParseError : public Error {
public:
  ParseError(std::string file, std::size_t line, std::size_t column,
             const std::string &what)
      : Error(file + ":" + std::to_string(line) + ":" +
              std::to_string(column) + ": " + what),
        file_(std::move(file)), line_(line), column_(column) {}
  const std::string &file() const { return file_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
};

class EmptyInput : public Error {
public:
  explicit EmptyInput(const std::string &file)
      : Error(file + ": no data rows") {}
};

class NonMonotoneTime : public Error {
public:
  NonMonotoneTime(const std::string &file, std::size_t line)
      : Error(file + ":" + std::to_string(line) +
              ": timestamps must strictly increase"),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Scenario validation failure carrying the offending field path.
class ScenarioError : public Error {
public:
  ScenarioError(std::string path, const std::string &what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string &path() const { return path_; }

private:
  std::string path_;
};

class DisconnectedTopology : public Error {
public:
  explicit DisconnectedTopology(int node)
      : Error("node " + std::to_string(node) + " has no route to the office"),
        node_(node) {}
  int node() const { return node_; }

private:
  int node_;
};

class DuplicateId : public Error {
public:
  explicit DuplicateId(int node)
      : Error("duplicate node id " + std::to_string(node)), node_(node) {}
  int node() const { return node_; }

private:
  int node_;
};

class HorizonExceeded : public Error {
public:
  using Error::Error;
};

} // namespace floodcast
