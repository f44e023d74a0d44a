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

#include "evogrid/argfill.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "evogrid/errors.hpp"

namespace evogrid {

using nlohmann::json;

namespace {

HeuristicRule::Kind KindFromString(const std::string& s) {
  if (s == "ne_of_concept") return HeuristicRule::Kind::kNeOfConcept;
  if (s == "keyword_map") return HeuristicRule::Kind::kKeywordMap;
  if (s == "constant_default") return HeuristicRule::Kind::kConstantDefault;
  if (s == "degree_lexicon") return HeuristicRule::Kind::kDegreeLexicon;
  throw ParseError("rules: unknown extractor kind '" + s + "'");
}

Value RuleValueFromJson(const json& j) {
  if (j.is_number_integer()) return Value::OfDegree(j.get<int>());
  return Value::FromString(j.get<std::string>());
}

}  // namespace

std::vector<HeuristicRule> LoadRules(const std::string& text,
                                     const Ontology& ontology) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("rules: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array()) {
    throw ParseError("rules: expected object with a \"rules\" array");
  }

  std::vector<HeuristicRule> rules;
  for (const auto& r : doc["rules"]) {
    HeuristicRule rule;
    rule.message_type = r.at("message_type").get<std::string>();
    rule.slot = r.at("slot").get<std::string>();
    rule.kind = KindFromString(r.at("extractor").get<std::string>());
    rule.priority = r.value("priority", 0);
    rule.per_ne = r.value("per_ne", false);
    switch (rule.kind) {
      case HeuristicRule::Kind::kNeOfConcept:
        for (const auto& c : r.at("concepts")) {
          const std::string cid = c.get<std::string>();
          if (!ontology.HasConcept(cid)) {
            throw ValidationError("rules: unknown concept '" + cid + "'");
          }
          rule.concepts.push_back(cid);
        }
        break;
      case HeuristicRule::Kind::kKeywordMap:
        for (const auto& [token, value] : r.at("map").items()) {
          rule.keyword_map.emplace(token, RuleValueFromJson(value));
        }
        break;
      case HeuristicRule::Kind::kConstantDefault:
        rule.constant = RuleValueFromJson(r.at("value"));
        break;
      case HeuristicRule::Kind::kDegreeLexicon:
        for (const auto& [token, value] : r.at("lexicon").items()) {
          rule.degree_lexicon.emplace(token, value.get<int>());
        }
        break;
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<HeuristicRule> LoadRulesFromFile(const std::string& path,
                                             const Ontology& ontology) {
  std::ifstream in(path);
  if (!in) throw ParseError("rules: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return LoadRules(buf.str(), ontology);
}

namespace {

bool NeMatches(const NeSpan& ne, const std::vector<std::string>& concepts,
               const Ontology& ontology) {
  for (const auto& c : concepts) {
    if (ontology.IsA(ne.concept, c)) return true;
  }
  return false;
}

// Applies one rule; nullopt when the rule does not fire. `anchor` is the
// NE already consumed by a per-NE rule, so single-match NE rules skip it.
std::optional<Value> ApplyRule(const HeuristicRule& rule,
                               const AnnotatedSentence& sentence,
                               const Ontology& ontology,
                               const NeSpan* anchor) {
  switch (rule.kind) {
    case HeuristicRule::Kind::kNeOfConcept:
      for (const auto& ne : sentence.nes) {
        if (anchor && &ne == anchor) continue;
        if (NeMatches(ne, rule.concepts, ontology)) {
          return Value::OfInstance(ne.instance);
        }
      }
      return std::nullopt;
    case HeuristicRule::Kind::kKeywordMap:
      for (const auto& token : sentence.tokens) {
        auto it = rule.keyword_map.find(token);
        if (it != rule.keyword_map.end()) return it->second;
      }
      return std::nullopt;
    case HeuristicRule::Kind::kConstantDefault:
      return rule.constant;
    case HeuristicRule::Kind::kDegreeLexicon:
      for (const auto& token : sentence.tokens) {
        auto it = rule.degree_lexicon.find(token);
        if (it != rule.degree_lexicon.end()) {
          return Value::OfDegree(it->second);
        }
      }
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Message> FillArguments(const AnnotatedSentence& sentence,
                                   const std::string& predicted_type,
                                   const std::vector<HeuristicRule>& rules,
                                   const SchemaRegistry& registry,
                                   const Ontology& ontology,
                                   const std::string& doc_id, int pub_time,
                                   const std::string& source) {
  if (predicted_type == SchemaRegistry::kNoneType) {
    throw ValidationError("fill_arguments: predicted type must not be None");
  }
  const MessageSchema& schema = registry.Get(predicted_type);

  // Applicable rules per slot, highest priority first, declaration order
  // breaking ties.
  std::vector<const HeuristicRule*> type_rules;
  for (const auto& rule : rules) {
    if (rule.message_type == predicted_type) type_rules.push_back(&rule);
  }
  if (type_rules.empty()) {
    throw LookupError("fill_arguments: no rules registered for type '" +
                      predicted_type + "'");
  }
  std::stable_sort(type_rules.begin(), type_rules.end(),
                   [](const HeuristicRule* a, const HeuristicRule* b) {
                     return a->priority > b->priority;
                   });

  // A per-NE rule anchors one message per matching NE (the one-sentence,
  // many-messages case). Without one, a single message is produced.
  const HeuristicRule* per_ne_rule = nullptr;
  for (const auto* rule : type_rules) {
    if (rule->per_ne && rule->kind == HeuristicRule::Kind::kNeOfConcept) {
      per_ne_rule = rule;
      break;
    }
  }
  std::vector<const NeSpan*> anchors;
  if (per_ne_rule) {
    for (const auto& ne : sentence.nes) {
      if (NeMatches(ne, per_ne_rule->concepts, ontology)) {
        anchors.push_back(&ne);
      }
    }
  }
  if (anchors.empty()) anchors.push_back(nullptr);

  std::vector<Message> out;
  for (const NeSpan* anchor : anchors) {
    Message msg;
    msg.type = predicted_type;
    msg.time = ResolveTime(pub_time, sentence.temporal_offset);
    msg.source = source;
    msg.provenance = {doc_id, {sentence.index}};
    for (const auto& arg : schema.args) {
      Value value = Value::Unfilled();
      if (anchor && per_ne_rule->slot == arg.name) {
        value = Value::OfInstance(anchor->instance);
      } else {
        for (const auto* rule : type_rules) {
          if (rule->slot != arg.name || rule->per_ne) continue;
          if (auto v = ApplyRule(*rule, sentence, ontology, anchor)) {
            value = *v;
            break;
          }
        }
      }
      msg.values.emplace(arg.name, std::move(value));
    }
    out.push_back(std::move(msg));
  }
  return out;
}

namespace {

// Slot-wise compatibility: no slot filled on both sides with different
// values, and each side fills something the other lacks.
bool CanMerge(const Message& a, const Message& b) {
  if (a.values.size() != b.values.size()) return false;
  bool a_extends_b = false;
  bool b_extends_a = false;
  for (const auto& [slot, va] : a.values) {
    auto it = b.values.find(slot);
    if (it == b.values.end()) return false;
    const Value& vb = it->second;
    if (va.IsFilled() && vb.IsFilled() && va != vb) return false;
    if (va.IsFilled() && !vb.IsFilled()) a_extends_b = true;
    if (vb.IsFilled() && !va.IsFilled()) b_extends_a = true;
  }
  return a_extends_b && b_extends_a;
}

Message Merge(const Message& a, const Message& b) {
  Message merged = a;
  for (auto& [slot, v] : merged.values) {
    if (!v.IsFilled()) v = b.values.at(slot);
  }
  std::vector<int> sentences = a.provenance.sentences;
  sentences.insert(sentences.end(), b.provenance.sentences.begin(),
                   b.provenance.sentences.end());
  std::sort(sentences.begin(), sentences.end());
  sentences.erase(std::unique(sentences.begin(), sentences.end()),
                  sentences.end());
  merged.provenance.sentences = std::move(sentences);
  return merged;
}

}  // namespace

std::vector<Message> MergeSpanning(std::vector<Message> messages) {
  std::stable_sort(messages.begin(), messages.end(),
                   [](const Message& a, const Message& b) {
                     return a.provenance < b.provenance;
                   });
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < messages.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < messages.size() && !changed; ++j) {
        const Message& a = messages[i];
        const Message& b = messages[j];
        if (a.type != b.type || a.time != b.time || a.source != b.source ||
            a.provenance.doc_id != b.provenance.doc_id) {
          continue;
        }
        if (CanMerge(a, b)) {
          Message merged = Merge(a, b);
          messages[i] = std::move(merged);
          messages.erase(messages.begin() + static_cast<long>(j));
          changed = true;
        }
      }
    }
  }
  return messages;
}

}  // namespace evogrid
