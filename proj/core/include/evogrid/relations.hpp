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

#ifndef EVOGRID_RELATIONS_HPP_
#define EVOGRID_RELATIONS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "evogrid/grid.hpp"
#include "evogrid/ontology.hpp"
#include "evogrid/schema.hpp"

namespace evogrid {

// Per-slot condition on a message pair, evaluated on the canonical
// (from, to) order. Ordering comparators apply to degree slots;
// subsumption comparators to concept/instance slots and are strict
// (a value never subsumes itself).
struct ArgPredicate {
  enum class Comparator {
    kEqual,
    kNotEqual,
    kApproxEqual,  // 0 < |from - to| <= delta
    kLess,         // from < to
    kGreater,      // from > to
    kSubsumes,     // concept(from) strict ancestor of concept(to)
    kSubsumedBy,
    kAny,
  };

  std::string slot;
  Comparator comparator = Comparator::kEqual;
  // Tolerance for kApproxEqual; falls back to RelationConfig when unset.
  std::optional<int> delta;
};

// Declarative cross-document relation over same-type message pairs.
struct RelationSpec {
  enum class Axis { kSynchronic, kDiachronic };
  enum class SourceCondition { kSame, kDifferent };
  enum class FillCondition {
    kNone,
    // Shared filled slots equal and one filled-slot set a strict superset
    // of the other (either direction).
    kStrictSubOrSuper,
  };

  std::string name;
  Axis axis = Axis::kSynchronic;
  std::string message_type;
  // 0 for synchronic; minimum chronological distance (>= 1) for diachronic.
  int temporal_distance = 0;
  SourceCondition source_condition = SourceCondition::kDifferent;
  std::vector<ArgPredicate> predicates;
  FillCondition fill_condition = FillCondition::kNone;
};

struct RelationInstance {
  std::string spec;
  Message from;
  Message to;

  std::string Key() const;
};

// Matching tolerances shared by both extraction routes.
struct RelationConfig {
  // Synchronic time tolerance; 0 means linear evolution (equal times only).
  int window = 0;
  int max_diachronic_distance = 1;
  int default_delta = 10;
  bool parallel = false;
};

std::vector<RelationSpec> LoadRelationSpecs(const std::string& text);
std::vector<RelationSpec> LoadRelationSpecsFromFile(const std::string& path);

// Sorted by (spec name, from.time, from.source, identity). Serial and
// parallel runs produce byte-identical orderings.
std::vector<RelationInstance> ExtractRelations(
    const Grid& grid, const std::vector<RelationSpec>& specs,
    const Ontology& ontology, const RelationConfig& config);

/// Independent oracle: every ordered message pair checked directly against
// the spec conditions. Must coincide with ExtractRelations.
std::vector<RelationInstance> BruteForceRelations(
    const std::vector<Message>& messages,
    const std::vector<RelationSpec>& specs, const Ontology& ontology,
    const RelationConfig& config);

std::string RelationsToJsonText(const std::vector<RelationInstance>& relations);

}  // namespace evogrid

#endif  // EVOGRID_RELATIONS_HPP_
