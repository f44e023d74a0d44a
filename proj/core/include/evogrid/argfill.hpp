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

#ifndef EVOGRID_ARGFILL_HPP_
#define EVOGRID_ARGFILL_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evogrid/ontology.hpp"
#include "evogrid/schema.hpp"

namespace evogrid {

// A named-entity annotation over a token span [begin, end).
struct NeSpan {
  int begin = 0;
  int end = 0;
  std::string instance;
  std::string concept;
};

// Gold message annotation attached to a sentence.
struct GoldAnnotation {
  std::string type;
  std::map<std::string, Value> slots;
  std::optional<int> temporal_offset;
};

struct AnnotatedSentence {
  int index = 0;
  std::vector<std::string> tokens;
  std::vector<NeSpan> nes;
  std::vector<GoldAnnotation> gold;
  std::optional<int> temporal_offset;
};

// One slot-filling heuristic. Rules are data: the bundled football rules
// are calibrated to the synthetic corpus and fully replaceable.
struct HeuristicRule {
  enum class Kind {
    kNeOfConcept,     // first NE subsumed by one of `concepts`
    kKeywordMap,      // token -> slot value
    kConstantDefault, // unconditional constant
    kDegreeLexicon,   // token -> integer 0-100
  };

  std::string message_type;
  std::string slot;
  Kind kind = Kind::kNeOfConcept;
  std::vector<std::string> concepts;
  std::map<std::string, Value> keyword_map;
  Value constant;
  std::map<std::string, int> degree_lexicon;
  int priority = 0;
  // kNeOfConcept only: emit one message per matching NE instead of taking
  // the first match. At most one rule per type may set this.
  bool per_ne = false;
};

std::vector<HeuristicRule> LoadRules(const std::string& text,
                                     const Ontology& ontology);
std::vector<HeuristicRule> LoadRulesFromFile(const std::string& path,
                                             const Ontology& ontology);

// Builds messages of `predicted_type` from one sentence. Slots are filled
// by the highest-priority applicable rule; unresolved slots stay UNFILLED
// and mark the message partial. Throws LookupError when no rule exists for
// the type at all.
std::vector<Message> FillArguments(const AnnotatedSentence& sentence,
                                   const std::string& predicted_type,
                                   const std::vector<HeuristicRule>& rules,
                                   const SchemaRegistry& registry,
                                   const Ontology& ontology,
                                   const std::string& doc_id, int pub_time,
                                   const std::string& source);

// Merges same-type/time/source messages from one document whose filled
// slots are non-conflicting and complementary (a message spanning several
// sentences). Conflicting candidates are left alone. Idempotent.
std::vector<Message> MergeSpanning(std::vector<Message> messages);

}  // namespace evogrid

#endif  // EVOGRID_ARGFILL_HPP_
