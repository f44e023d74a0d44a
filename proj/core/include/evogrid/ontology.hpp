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

#ifndef EVOGRID_ONTOLOGY_HPP_
#define EVOGRID_ONTOLOGY_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace evogrid {

// One node of the taxonomic domain ontology. Concepts form a forest via
// single-parent is-a links; named entity instances hang off concepts.
struct Concept {
  std::string id;
  std::string label;
  std::optional<std::string> parent;
  std::vector<std::string> instances;
};

// Immutable single-parent taxonomy with named instances. Safe for
// unrestricted concurrent reads after construction.
class Ontology {
 public:
  Ontology() = default;

  // Parses an ontology file (JSON list of concepts). Rejects duplicate
  // concept ids, duplicate instance ids, dangling parent references and
  // parent cycles.
  static Ontology FromJsonText(const std::string& text);
  static Ontology FromFile(const std::string& path);

  bool HasConcept(const std::string& id) const;
  const Concept& GetConcept(const std::string& id) const;

  // True iff `super` lies on `sub`'s parent chain. Reflexive and transitive.
  bool IsA(const std::string& sub, const std::string& super) const;

  // Strict subsumption: IsA(sub, super) and sub != super.
  bool StrictlyIsA(const std::string& sub, const std::string& super) const;

  bool HasInstance(const std::string& instance) const;

  // Owning concept of a registered instance id.
  const std::string& ConceptOfInstance(const std::string& instance) const;

  // All instance ids registered under `concept_id` or any of its
  // descendants, sorted.
  std::vector<std::string> InstancesUnder(const std::string& concept_id) const;

  // Concept ids with no parent, sorted.
  const std::vector<std::string>& Roots() const { return roots_; }

  // All concept ids, sorted.
  std::vector<std::string> ConceptIds() const;

  std::size_t ConceptCount() const { return concepts_.size(); }

 private:
  std::map<std::string, Concept> concepts_;
  std::map<std::string, std::string> instance_owner_;
  std::vector<std::string> roots_;
};

}  // namespace evogrid

#endif  // EVOGRID_ONTOLOGY_HPP_
