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

#ifndef EVOGRID_SCHEMA_HPP_
#define EVOGRID_SCHEMA_HPP_

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evogrid/ontology.hpp"

namespace evogrid {

// A message argument value: a named-entity instance, a bare concept id,
// an integer on the 0-100 degree scale, or the explicit UNFILLED sentinel
// emitted by the argument filler for slots it could not resolve.
struct Value {
  enum class Kind { kUnfilled, kInstance, kConcept, kDegree };

  Kind kind = Kind::kUnfilled;
  std::string text;  // instance or concept id
  int degree = 0;

  static Value Unfilled() { return Value{}; }
  static Value OfInstance(std::string id) {
    return Value{Kind::kInstance, std::move(id), 0};
  }
  static Value OfConcept(std::string id) {
    return Value{Kind::kConcept, std::move(id), 0};
  }
  static Value OfDegree(int d) { return Value{Kind::kDegree, {}, d}; }

  bool IsFilled() const { return kind != Kind::kUnfilled; }

  // Canonical text form used in identity keys and dumps.
  std::string ToString() const;
  static Value FromString(const std::string& s);

  friend auto operator<=>(const Value&, const Value&) = default;
};

// One typed argument slot. A slot either holds a degree (integer 0-100)
// or a value subsumed by at least one of the listed concepts; the list
// form covers unions such as "player or team".
struct ArgumentSpec {
  std::string name;
  bool is_degree = false;
  std::vector<std::string> concepts;  // empty iff is_degree
};

// Declarative constraint on one slot of a message, checked at validation
// time. Comparator keywords are shared with the relation predicate grammar.
struct SlotConstraint {
  std::string slot;
  std::string comparator;  // equal | not_equal | less | greater
  Value operand;
};

struct MessageSchema {
  std::string type_name;
  std::vector<ArgumentSpec> args;
  std::vector<SlotConstraint> constraints;

  const ArgumentSpec* FindArg(const std::string& name) const;
};

struct Provenance {
  std::string doc_id;
  std::vector<int> sentences;

  friend auto operator<=>(const Provenance&, const Provenance&) = default;
};

// A message instance: typed slot values plus the time unit it refers to
// and the source that reported it.
struct Message {
  std::string type;
  std::map<std::string, Value> values;
  int time = 0;
  std::string source;
  Provenance provenance;

  bool IsPartial() const;
  int FilledSlotCount() const;

  // type + time + source + values; the key used for gold/predicted matching.
  std::string ContentKey() const;
  // ContentKey plus provenance; the grid's duplicate-detection identity.
  std::string IdentityKey() const;

  friend auto operator<=>(const Message&, const Message&) = default;
};

// All declared message types plus the reserved pseudo-type None used to
// label sentences that carry no message.
class SchemaRegistry {
 public:
  static constexpr const char* kNoneType = "None";

  SchemaRegistry();

  static SchemaRegistry FromJsonText(const std::string& text,
                                     const Ontology& ontology);
  static SchemaRegistry FromFile(const std::string& path,
                                 const Ontology& ontology);

  bool Has(const std::string& type_name) const;
  const MessageSchema& Get(const std::string& type_name) const;
  std::vector<std::string> TypeNames() const;  // sorted, includes None
  std::size_t Size() const { return schemas_.size(); }

 private:
  std::map<std::string, MessageSchema> schemas_;
};

// Time a message refers to: publication time unless a temporal expression
// supplied a signed round offset. Throws ValidationError on negative result.
int ResolveTime(int pub_time, std::optional<int> temporal_offset);

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;  // UNFILLED slots

  bool ok() const { return violations.empty(); }
};

// Type-checks filled slots against the schema and evaluates schema
// constraints. UNFILLED slots surface as warnings, not violations.
ValidationReport ValidateMessage(const Message& msg,
                                 const SchemaRegistry& registry,
                                 const Ontology& ontology);

}  // namespace evogrid

#endif  // EVOGRID_SCHEMA_HPP_
