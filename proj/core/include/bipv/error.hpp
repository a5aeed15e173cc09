/* Copyright 2026 The bipv-assess Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace bipv {

// Error kinds double as CLI exit codes.
enum class ErrorKind : int {
  kValidation = 1,
  kSchema = 2,
  kMissingInput = 3,
  kComputation = 4,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

// Out-of-range argument to a pure computation (negative area, threshold > 1...).
class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& message)
      : Error(ErrorKind::kValidation, message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorKind::kValidation, message) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message)
      : Error(ErrorKind::kSchema, message) {}
};

class MissingInputError : public Error {
 public:
  explicit MissingInputError(const std::string& message)
      : Error(ErrorKind::kMissingInput, message) {}
};

class ComputationError : public Error {
 public:
  explicit ComputationError(const std::string& message)
      : Error(ErrorKind::kComputation, message) {}
};

}  // namespace bipv
