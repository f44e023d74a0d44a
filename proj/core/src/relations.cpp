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

#include "evogrid/relations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "evogrid/errors.hpp"

namespace evogrid {

using nlohmann::json;

namespace {

ArgPredicate::Comparator ComparatorFromString(const std::string& s) {
  using C = ArgPredicate::Comparator;
  if (s == "equal") return C::kEqual;
  if (s == "not_equal") return C::kNotEqual;
  if (s == "approx_equal") return C::kApproxEqual;
  if (s == "less") return C::kLess;
  if (s == "greater") return C::kGreater;
  if (s == "subsumes") return C::kSubsumes;
  if (s == "subsumed_by") return C::kSubsumedBy;
  if (s == "any") return C::kAny;
  throw ParseError("relations: unknown comparator '" + s + "'");
}

}  // namespace

std::vector<RelationSpec> LoadRelationSpecs(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("relations: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("specs") || !doc["specs"].is_array()) {
    throw ParseError("relations: expected object with a \"specs\" array");
  }

  std::vector<RelationSpec> specs;
  for (const auto& s : doc["specs"]) {
    RelationSpec spec;
    spec.name = s.at("name").get<std::string>();
    const std::string axis = s.at("axis").get<std::string>();
    if (axis == "synchronic") {
      spec.axis = RelationSpec::Axis::kSynchronic;
    } else if (axis == "diachronic") {
      spec.axis = RelationSpec::Axis::kDiachronic;
    } else {
      throw ParseError("relations: unknown axis '" + axis + "'");
    }
    spec.message_type = s.at("message_type").get<std::string>();
    spec.temporal_distance = s.value(
        "temporal_distance",
        spec.axis == RelationSpec::Axis::kSynchronic ? 0 : 1);
    const std::string source_cond = s.value(
        "source_condition",
        spec.axis == RelationSpec::Axis::kSynchronic ? "different" : "same");
    if (source_cond == "same") {
      spec.source_condition = RelationSpec::SourceCondition::kSame;
    } else if (source_cond == "different") {
      spec.source_condition = RelationSpec::SourceCondition::kDifferent;
    } else {
      throw ParseError("relations: unknown source_condition '" + source_cond +
                       "'");
    }
    for (const auto& p : s.value("predicates", json::array())) {
      ArgPredicate pred;
      pred.slot = p.at("slot").get<std::string>();
      pred.comparator = ComparatorFromString(p.at("comparator").get<std::string>());
      if (p.contains("delta")) pred.delta = p["delta"].get<int>();
      spec.predicates.push_back(std::move(pred));
    }
    const std::string fill = s.value("fill_condition", "none");
    if (fill == "strict_sub_or_super") {
      spec.fill_condition = RelationSpec::FillCondition::kStrictSubOrSuper;
    } else if (fill != "none") {
      throw ParseError("relations: unknown fill_condition '" + fill + "'");
    }

    // Axis invariants.
    if (spec.axis == RelationSpec::Axis::kSynchronic &&
        (spec.temporal_distance != 0 ||
         spec.source_condition != RelationSpec::SourceCondition::kDifferent)) {
      throw ValidationError("relations: synchronic spec '" + spec.name +
                            "' requires temporal_distance 0 and different "
                            "sources");
    }
    if (spec.axis == RelationSpec::Axis::kDiachronic &&
        (spec.temporal_distance < 1 ||
         spec.source_condition != RelationSpec::SourceCondition::kSame)) {
      throw ValidationError("relations: diachronic spec '" + spec.name +
                            "' requires temporal_distance >= 1 and same "
                            "source");
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::vector<RelationSpec> LoadRelationSpecsFromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("relations: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return LoadRelationSpecs(buf.str());
}

std::string RelationInstance::Key() const {
  return spec + "|" + from.IdentityKey() + ">" + to.IdentityKey();
}

namespace {

// Canonical order inside an unordered synchronic pair: by time, then
// source id, then identity. Independent of grid source numbering so both
// extraction routes agree.
bool CanonicalBefore(const Message& a, const Message& b) {
  return std::tie(a.time, a.source) < std::tie(b.time, b.source) ||
         (a.time == b.time && a.source == b.source &&
          a.IdentityKey() < b.IdentityKey());
}

std::optional<std::string> ValueConcept(const Value& v,
                                        const Ontology& ontology) {
  if (v.kind == Value::Kind::kInstance && ontology.HasInstance(v.text)) {
    return ontology.ConceptOfInstance(v.text);
  }
  if (v.kind == Value::Kind::kConcept && ontology.HasConcept(v.text)) {
    return v.text;
  }
  return std::nullopt;
}

bool PredicateHolds(const ArgPredicate& pred, const Message& from,
                    const Message& to, const Ontology& ontology,
                    const RelationConfig& config) {
  using C = ArgPredicate::Comparator;
  if (pred.comparator == C::kAny) return true;
  auto fit = from.values.find(pred.slot);
  auto tit = to.values.find(pred.slot);
  if (fit == from.values.end() || tit == to.values.end()) return false;
  const Value& a = fit->second;
  const Value& b = tit->second;
  if (!a.IsFilled() || !b.IsFilled()) return false;
  switch (pred.comparator) {
    case C::kEqual:
      return a == b;
    case C::kNotEqual:
      return a != b;
    case C::kApproxEqual: {
      if (a.kind != Value::Kind::kDegree || b.kind != Value::Kind::kDegree) {
        return false;
      }
      const int diff = std::abs(a.degree - b.degree);
      return diff > 0 && diff <= pred.delta.value_or(config.default_delta);
    }
    case C::kLess:
      return a.kind == Value::Kind::kDegree && b.kind == Value::Kind::kDegree &&
             a.degree < b.degree;
    case C::kGreater:
      return a.kind == Value::Kind::kDegree && b.kind == Value::Kind::kDegree &&
             a.degree > b.degree;
    case C::kSubsumes: {
      auto ca = ValueConcept(a, ontology);
      auto cb = ValueConcept(b, ontology);
      return ca && cb && ontology.StrictlyIsA(*cb, *ca);
    }
    case C::kSubsumedBy: {
      auto ca = ValueConcept(a, ontology);
      auto cb = ValueConcept(b, ontology);
      return ca && cb && ontology.StrictlyIsA(*ca, *cb);
    }
    case C::kAny:
      return true;
  }
  return false;
}

bool FillConditionHolds(RelationSpec::FillCondition cond, const Message& from,
                        const Message& to) {
  if (cond == RelationSpec::FillCondition::kNone) return true;
  bool from_extra = false;
  bool to_extra = false;
  for (const auto& [slot, a] : from.values) {
    auto it = to.values.find(slot);
    const Value* b = it == to.values.end() ? nullptr : &it->second;
    const bool af = a.IsFilled();
    const bool bf = b && b->IsFilled();
    if (af && bf && a != *b) return false;  // shared slots must agree
    if (af && !bf) from_extra = true;
    if (bf && !af) to_extra = true;
  }
  for (const auto& [slot, b] : to.values) {
    if (!from.values.count(slot) && b.IsFilled()) to_extra = true;
  }
  return from_extra != to_extra;  // strict superset in exactly one direction
}

// Full spec conditions over a canonically ordered pair.
bool SpecMatches(const RelationSpec& spec, const Message& from,
                 const Message& to, const Ontology& ontology,
                 const RelationConfig& config) {
  if (from.type != spec.message_type || to.type != spec.message_type) {
    return false;
  }
  if (spec.axis == RelationSpec::Axis::kSynchronic) {
    if (from.source == to.source) return false;
    if (std::abs(from.time - to.time) > config.window) return false;
  } else {
    if (from.source != to.source) return false;
    const int dt = to.time - from.time;
    if (dt < spec.temporal_distance || dt > config.max_diachronic_distance) {
      return false;
    }
  }
  if (!FillConditionHolds(spec.fill_condition, from, to)) return false;
  for (const auto& pred : spec.predicates) {
    if (!PredicateHolds(pred, from, to, ontology, config)) return false;
  }
  return true;
}

void SortRelations(std::vector<RelationInstance>& relations) {
  std::sort(relations.begin(), relations.end(),
            [](const RelationInstance& a, const RelationInstance& b) {
              return std::tie(a.spec, a.from.time, a.from.source) <
                         std::tie(b.spec, b.from.time, b.from.source) ||
                     (std::tie(a.spec, a.from.time, a.from.source) ==
                          std::tie(b.spec, b.from.time, b.from.source) &&
                      a.Key() < b.Key());
            });
}

std::vector<RelationInstance> ExtractForSpec(const Grid& grid,
                                             const RelationSpec& spec,
                                             const Ontology& ontology,
                                             const RelationConfig& config) {
  std::vector<RelationInstance> out;
  if (!grid.TimeRange()) return out;
  const auto [t_min, t_max] = *grid.TimeRange();
  const auto& sources = grid.Sources();

  if (spec.axis == RelationSpec::Axis::kDiachronic) {
    for (int t = t_min; t <= t_max; ++t) {
      for (const auto& source : sources) {
        const auto& cell = grid.Cell(t, source);
        if (cell.empty()) continue;
        for (int dt = std::max(1, spec.temporal_distance);
             dt <= config.max_diachronic_distance; ++dt) {
          if (t + dt > t_max) break;
          for (const auto& from : cell) {
            for (const auto& to : grid.Cell(t + dt, source)) {
              if (SpecMatches(spec, from, to, ontology, config)) {
                out.push_back({spec.name, from, to});
              }
            }
          }
        }
      }
    }
    return out;
  }

  // Synchronic: unordered cell pairs within the window, different sources.
  for (int t1 = t_min; t1 <= t_max; ++t1) {
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const auto& cell1 = grid.Cell(t1, sources[i]);
      if (cell1.empty()) continue;
      for (int t2 = t1; t2 <= std::min(t_max, t1 + config.window); ++t2) {
        for (std::size_t j = 0; j < sources.size(); ++j) {
          if (i == j) continue;
          if (t2 == t1 && j < i) continue;  // unordered cell pair once
          for (const auto& a : cell1) {
            for (const auto& b : grid.Cell(t2, sources[j])) {
              const Message& from = CanonicalBefore(a, b) ? a : b;
              const Message& to = CanonicalBefore(a, b) ? b : a;
              if (SpecMatches(spec, from, to, ontology, config)) {
                out.push_back({spec.name, from, to});
              }
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<RelationInstance> ExtractRelations(
    const Grid& grid, const std::vector<RelationSpec>& specs,
    const Ontology& ontology, const RelationConfig& config) {
  std::vector<RelationInstance> all;
  if (config.parallel) {
    std::vector<std::future<std::vector<RelationInstance>>> futures;
    futures.reserve(specs.size());
    for (const auto& spec : specs) {
      futures.push_back(std::async(std::launch::async, [&grid, &spec,
                                                        &ontology, &config] {
        return ExtractForSpec(grid, spec, ontology, config);
      }));
    }
    for (auto& f : futures) {
      auto part = f.get();
      all.insert(all.end(), part.begin(), part.end());
    }
  } else {
    for (const auto& spec : specs) {
      auto part = ExtractForSpec(grid, spec, ontology, config);
      all.insert(all.end(), part.begin(), part.end());
    }
  }
  SortRelations(all);
  return all;
}

namespace {

// Deliberately plain re-statement of the spec conditions, kept separate
// from the grid-driven path so it can serve as its oracle.
bool BruteSpecMatches(const RelationSpec& spec, const Message& m1,
                      const Message& m2, const Ontology& ontology,
                      const RelationConfig& config) {
  if (m1.type != spec.message_type || m2.type != spec.message_type) {
    return false;
  }
  if (spec.axis == RelationSpec::Axis::kSynchronic) {
    // Canonical representative of the unordered pair only.
    if (!CanonicalBefore(m1, m2)) return false;
    if (m1.source == m2.source) return false;
    if (std::abs(m1.time - m2.time) > config.window) return false;
  } else {
    if (m1.source != m2.source) return false;
    if (m2.time <= m1.time) return false;
    if (m2.time - m1.time < spec.temporal_distance) return false;
    if (m2.time - m1.time > config.max_diachronic_distance) return false;
  }
  if (!FillConditionHolds(spec.fill_condition, m1, m2)) return false;
  for (const auto& pred : spec.predicates) {
    if (!PredicateHolds(pred, m1, m2, ontology, config)) return false;
  }
  return true;
}

}  // namespace

std::vector<RelationInstance> BruteForceRelations(
    const std::vector<Message>& messages,
    const std::vector<RelationSpec>& specs, const Ontology& ontology,
    const RelationConfig& config) {
  std::vector<RelationInstance> out;
  for (const auto& spec : specs) {
    for (std::size_t i = 0; i < messages.size(); ++i) {
      for (std::size_t j = 0; j < messages.size(); ++j) {
        if (i == j) continue;
        if (BruteSpecMatches(spec, messages[i], messages[j], ontology,
                             config)) {
          out.push_back({spec.name, messages[i], messages[j]});
        }
      }
    }
  }
  SortRelations(out);
  return out;
}

std::string RelationsToJsonText(
    const std::vector<RelationInstance>& relations) {
  json doc = json::array();
  for (const auto& r : relations) {
    json entry;
    entry["relation"] = r.spec;
    auto dump_endpoint = [](const Message& m) {
      json jm;
      jm["type"] = m.type;
      jm["time"] = m.time;
      jm["source"] = m.source;
      json slots = json::object();
      for (const auto& [slot, v] : m.values) slots[slot] = v.ToString();
      jm["slots"] = slots;
      jm["doc"] = m.provenance.doc_id;
      jm["sentences"] = m.provenance.sentences;
      return jm;
    };
    entry["from"] = dump_endpoint(r.from);
    entry["to"] = dump_endpoint(r.to);
    doc.push_back(entry);
  }
  return doc.dump(2);
}

}  // namespace evogrid
