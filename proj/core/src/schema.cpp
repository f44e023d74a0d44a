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

#include "evogrid/schema.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "evogrid/errors.hpp"

namespace evogrid {

using nlohmann::json;

std::string Value::ToString() const {
  switch (kind) {
    case Kind::kUnfilled:
      return "_";
    case Kind::kInstance:
      return "i:" + text;
    case Kind::kConcept:
      return "c:" + text;
    case Kind::kDegree:
      return "d:" + std::to_string(degree);
  }
  return "_";
}

Value Value::FromString(const std::string& s) {
  if (s == "_") return Unfilled();
  if (s.size() >= 2 && s[1] == ':') {
    const std::string body = s.substr(2);
    switch (s[0]) {
      case 'i':
        return OfInstance(body);
      case 'c':
        return OfConcept(body);
      case 'd':
        return OfDegree(std::stoi(body));
      default:
        break;
    }
  }
  throw ParseError("value: cannot parse '" + s + "'");
}

const ArgumentSpec* MessageSchema::FindArg(const std::string& name) const {
  for (const auto& a : args) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

bool Message::IsPartial() const {
  for (const auto& [_, v] : values) {
    if (!v.IsFilled()) return true;
  }
  return false;
}

int Message::FilledSlotCount() const {
  int n = 0;
  for (const auto& [_, v] : values) {
    if (v.IsFilled()) ++n;
  }
  return n;
}

std::string Message::ContentKey() const {
  std::ostringstream key;
  key << type << '@' << time << '@' << source;
  for (const auto& [slot, v] : values) {
    key << '|' << slot << '=' << v.ToString();
  }
  return key.str();
}

std::string Message::IdentityKey() const {
  std::ostringstream key;
  key << ContentKey() << '#' << provenance.doc_id;
  for (int s : provenance.sentences) key << ':' << s;
  return key.str();
}

SchemaRegistry::SchemaRegistry() {
  schemas_.emplace(kNoneType, MessageSchema{kNoneType, {}, {}});
}

namespace {

Value ValueFromJson(const json& j) {
  if (j.is_number_integer()) return Value::OfDegree(j.get<int>());
  if (j.is_string()) return Value::FromString(j.get<std::string>());
  throw ParseError("value: expected integer or tagged string");
}

SlotConstraint ConstraintFromJson(const json& j) {
  SlotConstraint c;
  c.slot = j.at("slot").get<std::string>();
  c.comparator = j.at("comparator").get<std::string>();
  if (c.comparator != "equal" && c.comparator != "not_equal" &&
      c.comparator != "less" && c.comparator != "greater") {
    throw ParseError("schema: unknown constraint comparator '" + c.comparator +
                     "'");
  }
  c.operand = ValueFromJson(j.at("operand"));
  return c;
}

}  // namespace

SchemaRegistry SchemaRegistry::FromJsonText(const std::string& text,
                                            const Ontology& ontology) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("schemas: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schemas") ||
      !doc["schemas"].is_array()) {
    throw ParseError("schemas: expected object with a \"schemas\" array");
  }

  SchemaRegistry registry;
  for (const auto& s : doc["schemas"]) {
    MessageSchema schema;
    schema.type_name = s.at("type_name").get<std::string>();
    if (registry.schemas_.count(schema.type_name)) {
      throw ValidationError("schemas: duplicate type_name '" +
                            schema.type_name + "'");
    }
    for (const auto& a : s.value("args", json::array())) {
      ArgumentSpec spec;
      spec.name = a.at("name").get<std::string>();
      if (schema.FindArg(spec.name)) {
        throw ValidationError("schemas: duplicate slot '" + spec.name +
                              "' in '" + schema.type_name + "'");
      }
      const json& vt = a.at("value_type");
      if (vt.is_string() && vt.get<std::string>() == "Degree") {
        spec.is_degree = true;
      } else {
        auto add_concept = [&](const std::string& cid) {
          if (!ontology.HasConcept(cid)) {
            throw ValidationError("schemas: slot '" + spec.name + "' of '" +
                                  schema.type_name +
                                  "' references unknown concept '" + cid +
                                  "'");
          }
          spec.concepts.push_back(cid);
        };
        if (vt.is_string()) {
          add_concept(vt.get<std::string>());
        } else if (vt.is_array()) {
          for (const auto& c : vt) add_concept(c.get<std::string>());
        } else {
          throw ParseError("schemas: bad value_type for slot '" + spec.name +
                           "'");
        }
      }
      schema.args.push_back(std::move(spec));
    }
    for (const auto& c : s.value("constraints", json::array())) {
      SlotConstraint constraint = ConstraintFromJson(c);
      if (!schema.FindArg(constraint.slot)) {
        throw ValidationError("schemas: constraint on unknown slot '" +
                              constraint.slot + "' in '" + schema.type_name +
                              "'");
      }
      schema.constraints.push_back(std::move(constraint));
    }
    registry.schemas_.emplace(schema.type_name, std::move(schema));
  }
  return registry;
}

SchemaRegistry SchemaRegistry::FromFile(const std::string& path,
                                        const Ontology& ontology) {
  std::ifstream in(path);
  if (!in) throw ParseError("schemas: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromJsonText(buf.str(), ontology);
}

bool SchemaRegistry::Has(const std::string& type_name) const {
  return schemas_.count(type_name) != 0;
}

const MessageSchema& SchemaRegistry::Get(const std::string& type_name) const {
  auto it = schemas_.find(type_name);
  if (it == schemas_.end()) {
    throw LookupError("schemas: unknown message type '" + type_name + "'");
  }
  return it->second;
}

std::vector<std::string> SchemaRegistry::TypeNames() const {
  std::vector<std::string> out;
  out.reserve(schemas_.size());
  for (const auto& [name, _] : schemas_) out.push_back(name);
  return out;
}

int ResolveTime(int pub_time, std::optional<int> temporal_offset) {
  if (pub_time < 0) throw ValidationError("resolve_time: negative pub_time");
  const int t = pub_time + temporal_offset.value_or(0);
  if (t < 0) {
    throw ValidationError("resolve_time: offset " +
                          std::to_string(*temporal_offset) +
                          " moves time before round 0");
  }
  return t;
}

namespace {

// Concept a filled value denotes, for subsumption checks. Degree values
// have no concept.
std::optional<std::string> ConceptOfValue(const Value& v,
                                          const Ontology& ontology) {
  switch (v.kind) {
    case Value::Kind::kInstance:
      if (!ontology.HasInstance(v.text)) return std::nullopt;
      return ontology.ConceptOfInstance(v.text);
    case Value::Kind::kConcept:
      if (!ontology.HasConcept(v.text)) return std::nullopt;
      return v.text;
    default:
      return std::nullopt;
  }
}

bool ConstraintHolds(const SlotConstraint& c, const Value& v) {
  if (c.comparator == "equal") return v == c.operand;
  if (c.comparator == "not_equal") return v != c.operand;
  // Ordering comparators are degree-only.
  if (v.kind != Value::Kind::kDegree ||
      c.operand.kind != Value::Kind::kDegree) {
    return false;
  }
  if (c.comparator == "less") return v.degree < c.operand.degree;
  return v.degree > c.operand.degree;
}

}  // namespace

ValidationReport ValidateMessage(const Message& msg,
                                 const SchemaRegistry& registry,
                                 const Ontology& ontology) {
  const MessageSchema& schema = registry.Get(msg.type);
  ValidationReport report;

  for (const auto& arg : schema.args) {
    auto it = msg.values.find(arg.name);
    if (it == msg.values.end() || !it->second.IsFilled()) {
      report.warnings.push_back("slot '" + arg.name + "' is UNFILLED");
      continue;
    }
    const Value& v = it->second;
    if (arg.is_degree) {
      if (v.kind != Value::Kind::kDegree) {
        report.violations.push_back("slot '" + arg.name +
                                    "' expects a Degree value");
      } else if (v.degree < 0 || v.degree > 100) {
        report.violations.push_back("slot '" + arg.name + "' degree " +
                                    std::to_string(v.degree) +
                                    " outside 0-100");
      }
      continue;
    }
    auto concept_id = ConceptOfValue(v, ontology);
    if (!concept_id) {
      report.violations.push_back("slot '" + arg.name + "' value '" +
                                  v.ToString() + "' is not in the ontology");
      continue;
    }
    bool subsumed = false;
    for (const auto& allowed : arg.concepts) {
      if (ontology.IsA(*concept_id, allowed)) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) {
      report.violations.push_back("slot '" + arg.name + "' value '" +
                                  v.ToString() +
                                  "' is not subsumed by any allowed concept");
    }
  }

  // Slots that the schema does not declare.
  for (const auto& [slot, _] : msg.values) {
    if (!schema.FindArg(slot)) {
      report.violations.push_back("slot '" + slot + "' is not declared by '" +
                                  msg.type + "'");
    }
  }

  for (const auto& c : schema.constraints) {
    auto it = msg.values.find(c.slot);
    if (it == msg.values.end() || !it->second.IsFilled()) continue;
    if (!ConstraintHolds(c, it->second)) {
      report.violations.push_back("constraint '" + c.slot + " " +
                                  c.comparator + " " + c.operand.ToString() +
                                  "' violated");
    }
  }
  return report;
}

}  // namespace evogrid
