// Copyright 2026 The Evogrid Authors
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

#ifndef EVOGRID_ERRORS_HPP_
#define EVOGRID_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace evogrid {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (ontology, schema, rule, corpus files).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Well-formed input that violates a structural or semantic constraint.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Lookup of an unknown concept, instance, schema, source or template key.
class LookupError : public Error {
 public:
  explicit LookupError(const std::string& what) : Error(what) {}
};

}  // namespace evogrid

#endif  // EVOGRID_ERRORS_HPP_
