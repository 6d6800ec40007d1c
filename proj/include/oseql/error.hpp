// Copyright 2026 The oseql Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace oseql {

// Base for every error the library raises. The CLI maps the subclasses onto
// exit codes, so new failure kinds should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The input has no non-blank line, or violates a CodeInput invariant.
class InputError : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public InputError {
 public:
  using InputError::InputError;
};

// Transport to the model failed after all retries.
class OracleUnavailable : public Error {
 public:
  using Error::Error;
};

// The model answered, but the answer does not follow the wire protocol.
class MalformedResponse : public Error {
 public:
  using Error::Error;
};

// A precondition on a numeric routine was not met.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace oseql
