// Copyright 2026 The chfkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHFKIT_ERROR_H_
#define CHFKIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace chfkit {

// Root of every error thrown by the library. The three intermediate classes
// below partition failures so the CLI can map them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: files, headers, records, bundles.
class InputError : public Error {
 public:
  using Error::Error;
};

// A computation could not produce a meaningful number.
class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

#define CHFKIT_DEFINE_ERROR(Name, Base) \
  class Name : public Base {            \
   public:                              \
    using Base::Base;                   \
  }

// props
CHFKIT_DEFINE_ERROR(PressureOutOfRange, NumericError);

// correlations
CHFKIT_DEFINE_ERROR(InvalidGeometry, NumericError);
CHFKIT_DEFINE_ERROR(DomainError, NumericError);
CHFKIT_DEFINE_ERROR(NoConvergence, NumericError);
CHFKIT_DEFINE_ERROR(NoRoot, NumericError);

// dataset
CHFKIT_DEFINE_ERROR(ParseError, InputError);
CHFKIT_DEFINE_ERROR(SchemaError, InputError);
CHFKIT_DEFINE_ERROR(TooFewRecords, InputError);
CHFKIT_DEFINE_ERROR(DegenerateFeature, NumericError);

// net
CHFKIT_DEFINE_ERROR(NonFiniteLoss, NumericError);

// hybrid
CHFKIT_DEFINE_ERROR(NonFinitePrediction, NumericError);
CHFKIT_DEFINE_ERROR(FormatError, InputError);
CHFKIT_DEFINE_ERROR(VersionError, InputError);

// eval
CHFKIT_DEFINE_ERROR(LengthMismatch, InputError);
CHFKIT_DEFINE_ERROR(NonpositiveActual, InputError);
CHFKIT_DEFINE_ERROR(DegenerateHull, NumericError);

#undef CHFKIT_DEFINE_ERROR

}  // namespace chfkit

#endif  // CHFKIT_ERROR_H_
