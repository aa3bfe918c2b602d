#pragma once

#include <stdexcept>
#include <string>

namespace tyfix {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The checker subprocess crashed, timed out, or spoke malformed protocol.
/// A checker that ran and found type errors is *not* a failure.
class ExternalCheckerFailure : public Error {
 public:
  using Error::Error;
};

/// The fixture checker was asked about content it has no entry for.
class FixtureMiss : public ExternalCheckerFailure {
 public:
  using ExternalCheckerFailure::ExternalCheckerFailure;
};

class OverlappingHunks : public Error {
 public:
  using Error::Error;
};

/// A hunk's recorded old text does not match the content it is applied to.
class HunkMismatch : public Error {
 public:
  using Error::Error;
};

class MalformedDiff : public Error {
 public:
  using Error::Error;
};

class GeneratorFailure : public Error {
 public:
  using Error::Error;
};

class EmptyCandidateSet : public Error {
 public:
  using Error::Error;
};

/// Indentation markers would drive the nesting depth below zero.
class MalformedMarkers : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace tyfix
