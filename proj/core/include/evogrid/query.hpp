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

#ifndef EVOGRID_QUERY_HPP_
#define EVOGRID_QUERY_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evogrid/grid.hpp"
#include "evogrid/ontology.hpp"
#include "evogrid/relations.hpp"
#include "evogrid/schema.hpp"

namespace evogrid {

// Structured query. Every field is an optional filter; at least one must
// be present. Concept ids in `entities` expand to all instances under the
// concept.
struct Query {
  std::vector<std::string> entities;
  std::vector<std::string> types;
  std::optional<std::pair<int, int>> time_range;  // inclusive
  std::vector<std::string> sources;
  std::vector<std::string> relation_names;

  static Query FromJsonText(const std::string& text);
  static Query FromFile(const std::string& path);
};

// Query answer: the matching messages, closed over the relations whose
// endpoints both matched.
struct Subgrid {
  std::vector<Message> messages;
  std::vector<RelationInstance> relations;

  std::string ToJsonText() const;
};

Subgrid RunQuery(const Grid& grid,
                 const std::vector<RelationInstance>& relations,
                 const Query& query, const Ontology& ontology,
                 const SchemaRegistry& registry);

// Rendering patterns keyed by relation name or message type. Placeholders:
// {time}, {source}, {slot-name} for messages; {from.*} / {to.*} plus
// {time}, {source} (of the earlier endpoint) for relations.
struct TemplatePack {
  std::map<std::string, std::string> patterns;

  static TemplatePack FromJsonText(const std::string& text);
  static TemplatePack FromFile(const std::string& path);
};

// One line per relation instance, then one line per message not covered
// by any rendered relation; chronological, then source order, then
// relation name. Byte-deterministic. `diagnostics`, when given, receives
// notices such as "no content".
std::string RenderSummary(const Subgrid& subgrid, const TemplatePack& pack,
                          const std::vector<std::string>& source_order,
                          std::string* diagnostics = nullptr);

}  // namespace evogrid

#endif  // EVOGRID_QUERY_HPP_
