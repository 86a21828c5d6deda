#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hcsumm {

// Base class for all recoverable errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : Error {
  using Error::Error;
};

struct EmptyCorpus : Error {
  EmptyCorpus() : Error("corpus contains no sentences") {}
};

struct EmptySequence : Error {
  EmptySequence() : Error("token sequence is empty") {}
};

// Malformed input row; `line` is 1-based.
struct ParseError : Error {
  long line;
  ParseError(long line_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

// Malformed model or embedding file. `position` is a 1-based line number for
// line-oriented formats and a 0-based byte offset for ARPA files.
struct FormatError : Error {
  long position;
  FormatError(long position_, const std::string& what_)
      : Error(what_ + " (at " + std::to_string(position_) + ")"), position(position_) {}
};

struct DimensionMismatch : Error {
  long line;
  DimensionMismatch(long line_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct EmptyReference : Error {
  long line;
  explicit EmptyReference(long line_)
      : Error("line " + std::to_string(line_) + ": record has no reference"), line(line_) {}
};

struct InvalidLength : Error {
  using Error::Error;
};

struct NoNeighbor : Error {
  NoNeighbor() : Error("mask has no swap neighbor (all or no positions selected)") {}
};

struct TooLarge : Error {
  std::uint64_t count;
  TooLarge(std::uint64_t count_, std::uint64_t cap)
      : Error("candidate count " + std::to_string(count_) + " exceeds cap " +
              std::to_string(cap)),
        count(count_) {}
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct OverlappingBrackets : Error {
  using Error::Error;
};

}  // namespace hcsumm
