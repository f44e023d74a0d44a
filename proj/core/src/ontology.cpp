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

#include "evogrid/ontology.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "evogrid/errors.hpp"

namespace evogrid {

using nlohmann::json;

Ontology Ontology::FromJsonText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("ontology: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("concepts") ||
      !doc["concepts"].is_array()) {
    throw ParseError("ontology: expected object with a \"concepts\" array");
  }

  Ontology onto;
  for (const auto& c : doc["concepts"]) {
    Concept concept;
    if (!c.contains("id") || !c["id"].is_string()) {
      throw ParseError("ontology: concept without string \"id\"");
    }
    concept.id = c["id"].get<std::string>();
    concept.label = c.value("label", concept.id);
    if (c.contains("parent")) {
      concept.parent = c["parent"].get<std::string>();
    }
    for (const auto& inst : c.value("instances", json::array())) {
      concept.instances.push_back(inst.get<std::string>());
    }
    if (onto.concepts_.count(concept.id)) {
      throw ValidationError("ontology: duplicate concept id '" + concept.id +
                            "'");
    }
    onto.concepts_.emplace(concept.id, std::move(concept));
  }

  // Closure and instance uniqueness.
  for (const auto& [id, concept] : onto.concepts_) {
    if (concept.parent && !onto.concepts_.count(*concept.parent)) {
      throw ValidationError("ontology: concept '" + id +
                            "' references unknown parent '" + *concept.parent +
                            "'");
    }
    for (const auto& inst : concept.instances) {
      auto [it, inserted] = onto.instance_owner_.emplace(inst, id);
      if (!inserted) {
        throw ValidationError("ontology: instance '" + inst +
                              "' registered under both '" + it->second +
                              "' and '" + id + "'");
      }
    }
  }

  // Parent chains must terminate at a root.
  for (const auto& [id, concept] : onto.concepts_) {
    std::set<std::string> seen{id};
    const Concept* cur = &concept;
    while (cur->parent) {
      const std::string& p = *cur->parent;
      if (!seen.insert(p).second) {
        throw ValidationError("ontology: cycle through concept '" + p + "'");
      }
      cur = &onto.concepts_.at(p);
    }
    if (!concept.parent) onto.roots_.push_back(id);
  }
  return onto;
}

Ontology Ontology::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("ontology: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromJsonText(buf.str());
}

bool Ontology::HasConcept(const std::string& id) const {
  return concepts_.count(id) != 0;
}

const Concept& Ontology::GetConcept(const std::string& id) const {
  auto it = concepts_.find(id);
  if (it == concepts_.end()) {
    throw LookupError("ontology: unknown concept '" + id + "'");
  }
  return it->second;
}

bool Ontology::IsA(const std::string& sub, const std::string& super) const {
  if (!concepts_.count(super)) {
    throw LookupError("ontology: unknown concept '" + super + "'");
  }
  const Concept* cur = &GetConcept(sub);
  while (true) {
    if (cur->id == super) return true;
    if (!cur->parent) return false;
    cur = &concepts_.at(*cur->parent);
  }
}

bool Ontology::StrictlyIsA(const std::string& sub,
                           const std::string& super) const {
  return sub != super && IsA(sub, super);
}

bool Ontology::HasInstance(const std::string& instance) const {
  return instance_owner_.count(instance) != 0;
}

const std::string& Ontology::ConceptOfInstance(
    const std::string& instance) const {
  auto it = instance_owner_.find(instance);
  if (it == instance_owner_.end()) {
    throw LookupError("ontology: unknown instance '" + instance + "'");
  }
  return it->second;
}

std::vector<std::string> Ontology::InstancesUnder(
    const std::string& concept_id) const {
  if (!concepts_.count(concept_id)) {
    throw LookupError("ontology: unknown concept '" + concept_id + "'");
  }
  std::vector<std::string> out;
  for (const auto& [inst, owner] : instance_owner_) {
    if (IsA(owner, concept_id)) out.push_back(inst);
  }
  return out;
}

std::vector<std::string> Ontology::ConceptIds() const {
  std::vector<std::string> out;
  out.reserve(concepts_.size());
  for (const auto& [id, _] : concepts_) out.push_back(id);
  return out;
}

}  // namespace evogrid
