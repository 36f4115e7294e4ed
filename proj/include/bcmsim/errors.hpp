#pragma once

#include <stdexcept>
#include <string>

namespace bcmsim {

// Base class for all errors raised by this library. CLI maps subclasses to
// exit codes: configuration/parse problems -> 2, domain failures -> 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// -- configuration / input errors ------------------------------------------

class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed topology file or config file. Carries the 1-based line number
// when one applies (0 otherwise, e.g. an unopenable file).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// -- domain errors -----------------------------------------------------------

class InvalidEdgeError : public Error {
 public:
  using Error::Error;
};

class DuplicateEdgeError : public Error {
 public:
  using Error::Error;
};

class DisconnectedTopologyError : public Error {
 public:
  using Error::Error;
};

// Metric undefined on a single-node topology (sample variance needs N >= 2).
class DegenerateTopologyError : public Error {
 public:
  using Error::Error;
};

class InvalidTopologyError : public Error {
 public:
  using Error::Error;
};

class GenerationFailedError : public Error {
 public:
  using Error::Error;
};

class DisconnectedSubnetError : public Error {
 public:
  using Error::Error;
};

class NoRemovableEdgeError : public Error {
 public:
  using Error::Error;
};

class NoAddableEdgeError : public Error {
 public:
  using Error::Error;
};

// Raised by a rewiring step when no candidate move strictly lowers the BCM.
// Carries the best (lowest) BCM seen among the rejected candidates.
class LocalMinimumError : public Error {
 public:
  LocalMinimumError(const std::string& what, double best_candidate_bcm)
      : Error(what), best_candidate_bcm_(best_candidate_bcm) {}
  double best_candidate_bcm() const { return best_candidate_bcm_; }

 private:
  double best_candidate_bcm_;
};

class NoPathError : public Error {
 public:
  using Error::Error;
};

class InvalidRequestError : public Error {
 public:
  using Error::Error;
};

class InvalidQualityError : public Error {
 public:
  using Error::Error;
};

class InvalidPathError : public Error {
 public:
  using Error::Error;
};

}  // namespace bcmsim
