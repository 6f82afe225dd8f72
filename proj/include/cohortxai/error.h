/*
 * Copyright 2026 The cohortxai Authors.
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

#ifndef COHORTXAI_ERROR_H_
#define COHORTXAI_ERROR_H_

#include <stdexcept>
#include <string>

namespace cohortxai {

// Base of every error the library raises. Callers that only need a message
// can catch std::runtime_error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input bytes, layouts, or tables.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A documented precondition or invariant does not hold for the arguments.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Numerical failure during training (for example a diverging loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace cohortxai

#endif  // COHORTXAI_ERROR_H_
