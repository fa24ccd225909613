/*
 * Copyright 2026 The urecall Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace urecall {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or incompatible parameters; the CLI maps these to exit 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or unusable input data; the CLI maps these to exit 2.
class DataError : public Error {
 public:
  using Error::Error;
};

class InvalidCutoff : public UsageError {
 public:
  using UsageError::UsageError;
};

class IncompatibleCutoffs : public UsageError {
 public:
  using UsageError::UsageError;
};

class EnumerationTooLarge : public UsageError {
 public:
  using UsageError::UsageError;
};

class InvalidTrials : public UsageError {
 public:
  using UsageError::UsageError;
};

class InvalidSampleSize : public UsageError {
 public:
  using UsageError::UsageError;
};

// A user with no positive feedback in the relevant dataset; callers that
// aggregate over users catch this and record a skip instead of a score.
class NoPositives : public DataError {
 public:
  using DataError::DataError;
};

// A user whose randomly-exposed sample contains no positive feedback.
class NoObservedPositives : public DataError {
 public:
  using DataError::DataError;
};

class EmptyEvaluation : public DataError {
 public:
  using DataError::DataError;
};

class MissingPrediction : public DataError {
 public:
  using DataError::DataError;
};

class InvalidScore : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class DuplicatePair : public DataError {
 public:
  using DataError::DataError;
};

class InvalidLabel : public DataError {
 public:
  using DataError::DataError;
};

class IncompleteFullExposure : public DataError {
 public:
  using DataError::DataError;
};

class UndefinedCorrelation : public DataError {
 public:
  using DataError::DataError;
};

class EmptyCurve : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace urecall
