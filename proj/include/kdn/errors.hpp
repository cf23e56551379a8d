// Copyright (c) 2026, the kdnet authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace kdn {

// Base class so callers can catch all library errors at once.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Data / ingestion errors (CLI maps these to exit code 3).
struct ParseError : Error {
  using Error::Error;
};
struct EmptyClass : Error {
  using Error::Error;
};
struct TooFewSamples : Error {
  using Error::Error;
};
struct SingleClass : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

// Shape / argument errors.
struct DimMismatch : Error {
  using Error::Error;
};
struct SizeMismatch : Error {
  using Error::Error;
};
struct NonFinite : Error {
  using Error::Error;
};
struct MissingW : Error {
  using Error::Error;
};
struct WrongClassCount : Error {
  using Error::Error;
};
struct IndexError : Error {
  using Error::Error;
};

// Configuration errors (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// Numeric failures (CLI exit code 4).
struct NumericError : Error {
  using Error::Error;
};
struct ZeroDenominator : NumericError {
  using NumericError::NumericError;
};

// Model persistence.
struct ManifestVersionMismatch : Error {
  using Error::Error;
};
struct ChecksumMismatch : Error {
  using Error::Error;
};

}  // namespace kdn
