// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cutthumb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on arguments (sizes, rates, weights) was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two images (or an image and a patch/box) disagree on shape or channels.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A box does not fit inside the image it targets.
class OutOfBounds : public Error {
 public:
  using Error::Error;
};

/// to_grayscale was handed a single-channel image.
class AlreadyGrayscale : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling for non-overlapping boxes ran out of attempts.
class PlacementFailure : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File format is not one of the supported lossless codecs.
class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

/// File is of a supported format but its contents are malformed or truncated.
class CorruptData : public Error {
 public:
  using Error::Error;
};

}  // namespace cutthumb
