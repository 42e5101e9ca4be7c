// core/include/gsasv/errors.hpp

// Copyright 2026  The gsasv authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GSASV_ERRORS_HPP
#define GSASV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gsasv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside its mathematical domain (CLI exit code 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed file content (CLI exit code 2).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Missing or inconsistent data records (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Trial-protocol violations (CLI exit code 2).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Labels outside a declared vocabulary (CLI exit code 2).
class VocabError : public Error {
 public:
  using Error::Error;
};

// Evaluation impossible on the given score sets (CLI exit code 2).
class EvalError : public Error {
 public:
  using Error::Error;
};

// Incompatible array shapes (CLI exit code 2).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Non-finite values where finite ones are required (CLI exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace gsasv

#endif  // GSASV_ERRORS_HPP
