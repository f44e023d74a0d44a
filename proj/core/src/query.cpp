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

#include "evogrid/query.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "evogrid/errors.hpp"

namespace evogrid {

using nlohmann::json;

Query Query::FromJsonText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("query: ") + e.what());
  }
  Query q;
  for (const auto& e : doc.value("entities", json::array())) {
    q.entities.push_back(e.get<std::string>());
  }
  for (const auto& t : doc.value("types", json::array())) {
    q.types.push_back(t.get<std::string>());
  }
  if (doc.contains("time_range")) {
    const auto& r = doc["time_range"];
    if (!r.is_array() || r.size() != 2) {
      throw ParseError("query: time_range must be [min, max]");
    }
    q.time_range = {r[0].get<int>(), r[1].get<int>()};
  }
  for (const auto& s : doc.value("sources", json::array())) {
    q.sources.push_back(s.get<std::string>());
  }
  for (const auto& r : doc.value("relations", json::array())) {
    q.relation_names.push_back(r.get<std::string>());
  }
  if (q.entities.empty() && q.types.empty() && !q.time_range &&
      q.sources.empty() && q.relation_names.empty()) {
    throw ValidationError("query: at least one filter must be present");
  }
  return q;
}

Query Query::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("query: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromJsonText(buf.str());
}

namespace {

struct EntityFilter {
  std::set<std::string> instances;
  std::set<std::string> concepts;  // match concept values by subsumption

  bool Matches(const Message& msg, const Ontology& ontology) const {
    for (const auto& [_, v] : msg.values) {
      if (v.kind == Value::Kind::kInstance && instances.count(v.text)) {
        return true;
      }
      if (v.kind == Value::Kind::kConcept && ontology.HasConcept(v.text)) {
        for (const auto& c : concepts) {
          if (ontology.IsA(v.text, c)) return true;
        }
      }
    }
    return false;
  }
};

}  // namespace

Subgrid RunQuery(const Grid& grid,
                 const std::vector<RelationInstance>& relations,
                 const Query& query, const Ontology& ontology,
                 const SchemaRegistry& registry) {
  if (query.entities.empty() && query.types.empty() && !query.time_range &&
      query.sources.empty() && query.relation_names.empty()) {
    throw ValidationError("query: at least one filter must be present");
  }

  EntityFilter entity_filter;
  for (const auto& id : query.entities) {
    if (ontology.HasInstance(id)) {
      entity_filter.instances.insert(id);
    } else if (ontology.HasConcept(id)) {
      entity_filter.concepts.insert(id);
      for (const auto& inst : ontology.InstancesUnder(id)) {
        entity_filter.instances.insert(inst);
      }
    } else {
      throw LookupError("query: unknown entity '" + id + "'");
    }
  }
  for (const auto& t : query.types) {
    if (!registry.Has(t)) {
      throw LookupError("query: unknown message type '" + t + "'");
    }
  }
  for (const auto& s : query.sources) {
    grid.SourceIndex(s);  // throws on unknown source
  }

  Subgrid out;
  std::set<std::string> selected;
  for (const auto& msg : grid.AllMessages()) {
    if (!query.entities.empty() && !entity_filter.Matches(msg, ontology)) {
      continue;
    }
    if (!query.types.empty() &&
        std::find(query.types.begin(), query.types.end(), msg.type) ==
            query.types.end()) {
      continue;
    }
    if (query.time_range && (msg.time < query.time_range->first ||
                             msg.time > query.time_range->second)) {
      continue;
    }
    if (!query.sources.empty() &&
        std::find(query.sources.begin(), query.sources.end(), msg.source) ==
            query.sources.end()) {
      continue;
    }
    out.messages.push_back(msg);
    selected.insert(msg.IdentityKey());
  }
  std::sort(out.messages.begin(), out.messages.end(),
            [&grid](const Message& a, const Message& b) {
              return std::tie(a.time, a.source, a.type) <
                         std::tie(b.time, b.source, b.type) ||
                     (std::tie(a.time, a.source, a.type) ==
                          std::tie(b.time, b.source, b.type) &&
                      a.IdentityKey() < b.IdentityKey());
            });

  // Relation closure: both endpoints selected, name passing the filter.
  for (const auto& rel : relations) {
    if (!query.relation_names.empty() &&
        std::find(query.relation_names.begin(), query.relation_names.end(),
                  rel.spec) == query.relation_names.end()) {
      continue;
    }
    if (selected.count(rel.from.IdentityKey()) &&
        selected.count(rel.to.IdentityKey())) {
      out.relations.push_back(rel);
    }
  }
  return out;
}

std::string Subgrid::ToJsonText() const {
  json doc;
  json msgs = json::array();
  for (const auto& m : messages) {
    json jm;
    jm["type"] = m.type;
    jm["time"] = m.time;
    jm["source"] = m.source;
    json slots = json::object();
    for (const auto& [slot, v] : m.values) slots[slot] = v.ToString();
    jm["slots"] = slots;
    jm["doc"] = m.provenance.doc_id;
    jm["sentences"] = m.provenance.sentences;
    msgs.push_back(jm);
  }
  doc["messages"] = msgs;
  doc["relations"] = json::parse(RelationsToJsonText(relations));
  return doc.dump(2);
}

TemplatePack TemplatePack::FromJsonText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("templates: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("templates") ||
      !doc["templates"].is_object()) {
    throw ParseError("templates: expected object with a \"templates\" map");
  }
  TemplatePack pack;
  for (const auto& [key, pattern] : doc["templates"].items()) {
    pack.patterns.emplace(key, pattern.get<std::string>());
  }
  return pack;
}

TemplatePack TemplatePack::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("templates: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromJsonText(buf.str());
}

namespace {

std::string RenderValue(const Value& v) {
  switch (v.kind) {
    case Value::Kind::kUnfilled:
      return "unknown";
    case Value::Kind::kDegree:
      return std::to_string(v.degree);
    default:
      return v.text;
  }
}

std::string MessageField(const Message& msg, const std::string& field) {
  if (field == "time") return std::to_string(msg.time);
  if (field == "source") return msg.source;
  if (field == "type") return msg.type;
  auto it = msg.values.find(field);
  if (it == msg.values.end()) {
    throw LookupError("templates: placeholder '" + field +
                      "' matches no slot of '" + msg.type + "'");
  }
  return RenderValue(it->second);
}

std::string Substitute(const std::string& pattern, const Message* msg,
                       const RelationInstance* rel) {
  std::string out;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    if (pattern[pos] != '{') {
      out += pattern[pos++];
      continue;
    }
    const std::size_t close = pattern.find('}', pos);
    if (close == std::string::npos) {
      throw ParseError("templates: unterminated placeholder in '" + pattern +
                       "'");
    }
    const std::string name = pattern.substr(pos + 1, close - pos - 1);
    if (rel) {
      if (name.rfind("from.", 0) == 0) {
        out += MessageField(rel->from, name.substr(5));
      } else if (name.rfind("to.", 0) == 0) {
        out += MessageField(rel->to, name.substr(3));
      } else if (name == "time") {
        out += std::to_string(rel->from.time);
      } else if (name == "source") {
        out += rel->from.source;
      } else if (name == "relation") {
        out += rel->spec;
      } else {
        throw LookupError("templates: unknown relation placeholder '" + name +
                          "'");
      }
    } else {
      out += MessageField(*msg, name);
    }
    pos = close + 1;
  }
  return out;
}

}  // namespace

std::string RenderSummary(const Subgrid& subgrid, const TemplatePack& pack,
                          const std::vector<std::string>& source_order,
                          std::string* diagnostics) {
  // Messages covered by a rendered relation are not re-rendered standalone.
  std::set<std::string> covered;
  for (const auto& rel : subgrid.relations) {
    covered.insert(rel.from.IdentityKey());
    covered.insert(rel.to.IdentityKey());
  }

  std::vector<std::string> missing;
  for (const auto& rel : subgrid.relations) {
    if (!pack.patterns.count(rel.spec)) missing.push_back(rel.spec);
  }
  for (const auto& msg : subgrid.messages) {
    if (!covered.count(msg.IdentityKey()) && !pack.patterns.count(msg.type)) {
      missing.push_back(msg.type);
    }
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    std::string keys;
    for (const auto& k : missing) keys += (keys.empty() ? "" : ", ") + k;
    throw LookupError("templates: missing template keys: " + keys);
  }

  auto source_rank = [&source_order](const std::string& source) {
    for (std::size_t i = 0; i < source_order.size(); ++i) {
      if (source_order[i] == source) return static_cast<int>(i);
    }
    return static_cast<int>(source_order.size());
  };

  // (time, source rank, name, tiebreak) -> rendered line.
  using Item = std::tuple<int, int, std::string, std::string, std::string>;
  std::vector<Item> items;
  for (const auto& rel : subgrid.relations) {
    items.emplace_back(rel.from.time, source_rank(rel.from.source), rel.spec,
                       rel.Key(),
                       Substitute(pack.patterns.at(rel.spec), nullptr, &rel));
  }
  for (const auto& msg : subgrid.messages) {
    if (covered.count(msg.IdentityKey())) continue;
    items.emplace_back(msg.time, source_rank(msg.source), msg.type,
                       msg.IdentityKey(),
                       Substitute(pack.patterns.at(msg.type), &msg, nullptr));
  }
  std::sort(items.begin(), items.end());

  if (items.empty()) {
    if (diagnostics) *diagnostics += "no content\n";
    return "";
  }
  std::string text;
  for (const auto& item : items) {
    text += std::get<4>(item);
    text += '\n';
  }
  return text;
}

}  // namespace evogrid
