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

#include "evogrid/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "evogrid/errors.hpp"

namespace evogrid {

using nlohmann::json;

namespace {

std::string ReadFileOrThrow(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ParseError(std::string(what) + ": cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Document DocumentFromJsonText(const std::string& text,
                              const Ontology& ontology) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("document: ") + e.what());
  }
  Document out;
  out.id = doc.at("id").get<std::string>();
  out.source = doc.at("source").get<std::string>();
  out.pub_time = doc.at("pub_time").get<int>();
  int expected_index = 0;
  for (const auto& s : doc.at("sentences")) {
    AnnotatedSentence sentence;
    sentence.index = s.at("index").get<int>();
    if (sentence.index != expected_index++) {
      throw ValidationError("document '" + out.id +
                            "': sentence indexes not contiguous from 0");
    }
    for (const auto& t : s.at("tokens")) {
      sentence.tokens.push_back(t.get<std::string>());
    }
    for (const auto& n : s.value("nes", json::array())) {
      NeSpan ne;
      const auto& span = n.at("span");
      ne.begin = span[0].get<int>();
      ne.end = span[1].get<int>();
      ne.instance = n.at("instance").get<std::string>();
      ne.concept = n.at("concept").get<std::string>();
      if (!ontology.HasConcept(ne.concept)) {
        throw ValidationError("document '" + out.id +
                              "': NE references unknown concept '" +
                              ne.concept + "'");
      }
      sentence.nes.push_back(std::move(ne));
    }
    for (const auto& g : s.value("gold", json::array())) {
      GoldAnnotation gold;
      gold.type = g.at("type").get<std::string>();
      for (const auto& [slot, v] : g.at("slots").items()) {
        gold.slots.emplace(slot, v.is_number_integer()
                                     ? Value::OfDegree(v.get<int>())
                                     : Value::FromString(v.get<std::string>()));
      }
      if (g.contains("temporal_offset")) {
        gold.temporal_offset = g["temporal_offset"].get<int>();
        sentence.temporal_offset = gold.temporal_offset;
      }
      sentence.gold.push_back(std::move(gold));
    }
    out.sentences.push_back(std::move(sentence));
  }
  return out;
}

std::string DocumentToJsonText(const Document& doc) {
  json out;
  out["id"] = doc.id;
  out["source"] = doc.source;
  out["pub_time"] = doc.pub_time;
  json sentences = json::array();
  for (const auto& s : doc.sentences) {
    json js;
    js["index"] = s.index;
    js["tokens"] = s.tokens;
    json nes = json::array();
    for (const auto& n : s.nes) {
      json jn;
      jn["span"] = {n.begin, n.end};
      jn["instance"] = n.instance;
      jn["concept"] = n.concept;
      nes.push_back(jn);
    }
    js["nes"] = nes;
    json gold = json::array();
    for (const auto& g : s.gold) {
      json jg;
      jg["type"] = g.type;
      json slots = json::object();
      for (const auto& [slot, v] : g.slots) slots[slot] = v.ToString();
      jg["slots"] = slots;
      if (g.temporal_offset) jg["temporal_offset"] = *g.temporal_offset;
      gold.push_back(jg);
    }
    js["gold"] = gold;
    sentences.push_back(js);
  }
  out["sentences"] = sentences;
  return out.dump(2);
}

Corpus LoadCorpus(const std::string& manifest_path, const Ontology& ontology) {
  const std::string text = ReadFileOrThrow(manifest_path, "manifest");
  json manifest;
  try {
    manifest = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  Corpus corpus;
  for (const auto& s : manifest.at("sources")) {
    corpus.source_order.push_back(s.get<std::string>());
  }
  const auto base = std::filesystem::path(manifest_path).parent_path();
  std::set<std::string> ids;
  for (const auto& d : manifest.at("documents")) {
    const std::string rel = d.get<std::string>();
    const std::string path = (base / rel).string();
    Document doc = DocumentFromJsonText(ReadFileOrThrow(path, "document"),
                                        ontology);
    if (!ids.insert(doc.id).second) {
      throw ValidationError("corpus: duplicate document id '" + doc.id + "'");
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void WriteCorpus(const Corpus& corpus, const std::string& directory) {
  std::filesystem::create_directories(directory);
  json manifest;
  manifest["sources"] = corpus.source_order;
  json files = json::array();
  for (const auto& doc : corpus.documents) {
    const std::string name = doc.id + ".json";
    std::ofstream out(std::filesystem::path(directory) / name);
    out << DocumentToJsonText(doc) << '\n';
    files.push_back(name);
  }
  manifest["documents"] = files;
  std::ofstream out(std::filesystem::path(directory) / "manifest.json");
  out << manifest.dump(2) << '\n';
}

std::vector<Message> GoldMessages(const Corpus& corpus) {
  std::vector<Message> gold;
  for (const auto& doc : corpus.documents) {
    for (const auto& sentence : doc.sentences) {
      for (const auto& g : sentence.gold) {
        Message msg;
        msg.type = g.type;
        msg.values = g.slots;
        msg.time = ResolveTime(doc.pub_time, g.temporal_offset);
        msg.source = doc.source;
        msg.provenance = {doc.id, {sentence.index}};
        gold.push_back(std::move(msg));
      }
    }
  }
  return gold;
}

std::vector<LabeledSentence> ToLabeledSentences(const Corpus& corpus) {
  std::vector<LabeledSentence> out;
  for (const auto& doc : corpus.documents) {
    for (const auto& sentence : doc.sentences) {
      LabeledSentence labeled;
      labeled.tokens = sentence.tokens;
      for (const auto& ne : sentence.nes) {
        labeled.ne_concepts.push_back(ne.concept);
      }
      labeled.label = sentence.gold.empty() ? SchemaRegistry::kNoneType
                                            : sentence.gold.front().type;
      out.push_back(std::move(labeled));
    }
  }
  return out;
}

const std::vector<std::pair<std::string, int>>& DegreeLexicon() {
  static const std::vector<std::pair<std::string, int>> lexicon = {
      {"abysmal", 0},    {"dreadful", 10},   {"poor", 20},
      {"weak", 30},      {"lackluster", 40}, {"mediocre", 50},
      {"decent", 60},    {"solid", 70},      {"strong", 80},
      {"impressive", 90}, {"excellent", 100},
  };
  return lexicon;
}

namespace {

// Per-type cue vocabularies. Disjoint by construction so a bag-of-words
// classifier separates the noiseless corpus perfectly.
struct CueTable {
  std::string type;
  std::vector<std::string> cues;
};

const std::vector<CueTable>& Cues() {
  static const std::vector<CueTable> cues = {
      {"performance", {"performed", "displayed"}},
      {"card", {"booked", "cautioned"}},
      {"scorer", {"scored", "netted"}},
      {"refereeship", {"whistled", "officiated"}},
      {"injured", {"limped", "stretchered"}},
      {"win", {"defeated", "overcame"}},
      {"behavior", {"chanted", "rioted"}},
  };
  return cues;
}

const std::vector<std::string> kChatter = {"weather", "traffic", "parking",
                                           "anthem", "queues", "floodlights"};
const std::vector<std::string> kPlayers = {"Nalitzis", "Georgiou", "Markou",
                                           "Petrou"};
const std::vector<std::string> kTeams = {"AlphaFC", "BetaFC"};
const std::vector<std::string> kSpans = {"first_half", "second_half"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int Below(int n) { return static_cast<int>(engine_() % n); }
  bool Chance(double p) {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
  }

 private:
  std::mt19937_64 engine_;
};

std::string DegreeWord(int value) {
  for (const auto& [word, v] : DegreeLexicon()) {
    if (v == value) return word;
  }
  throw ValidationError("generator: no lexicon word for degree " +
                        std::to_string(value));
}

const std::string& RandomCue(Rng& rng, const std::string& type) {
  for (const auto& table : Cues()) {
    if (table.type == type) return table.cues[rng.Below(
        static_cast<int>(table.cues.size()))];
  }
  throw ValidationError("generator: no cue table for '" + type + "'");
}

// Cue of a different type, for the wrong_label noise channel.
const std::string& ForeignCue(Rng& rng, const std::string& type) {
  const auto& tables = Cues();
  while (true) {
    const auto& table = tables[rng.Below(static_cast<int>(tables.size()))];
    if (table.type != type) {
      return table.cues[rng.Below(static_cast<int>(table.cues.size()))];
    }
  }
}

struct SentenceDraft {
  std::string type;  // None for chatter
  std::vector<std::string> tokens;
  std::vector<NeSpan> nes;  // spans refer to token positions
  std::vector<GoldAnnotation> gold;
  std::optional<int> temporal_offset;
};

NeSpan MakeNe(int pos, const std::string& instance,
              const std::string& concept) {
  return NeSpan{pos, pos + 1, instance, concept};
}

// Shared truth for one round, emitted by every source.
struct RoundIncidents {
  std::vector<std::pair<std::string, int>> performances;  // player, value
  bool has_card = false;
  std::vector<std::string> card_players;
  std::string card_instance;  // yellow_card or red_card
  bool has_scorer = false;
  std::string scorer_player;
  std::string scorer_span;
  std::vector<std::string> injured_players;
  std::string winner;
};

}  // namespace

SyntheticCorpus GenerateSynthetic(const GeneratorConfig& config,
                                  const SchemaRegistry& registry,
                                  const Ontology& ontology,
                                  const std::vector<RelationSpec>& specs,
                                  const RelationConfig& relation_config) {
  if (config.rounds < 1 || config.sources < 1) {
    throw ValidationError("generator: rounds and sources must be >= 1");
  }
  auto check_prob = [](double p, const char* name) {
    if (p < 0.0 || p > 1.0) {
      throw ValidationError(std::string("generator: noise probability ") +
                            name + " outside [0,1]");
    }
  };
  check_prob(config.noise.drop_ne, "drop_ne");
  check_prob(config.noise.wrong_label, "wrong_label");
  check_prob(config.noise.drop_sentence, "drop_sentence");

  Rng rng(config.seed);

  SyntheticCorpus result;
  for (int s = 0; s < config.sources; ++s) {
    result.corpus.source_order.push_back(
        s < 26 ? std::string(1, static_cast<char>('A' + s))
               : "S" + std::to_string(s + 1));
  }

  // Performance truth evolves as a clamped random walk per tracked player.
  const std::vector<std::string> tracked = {kPlayers[0], kPlayers[1]};
  std::map<std::string, int> value_walk;
  for (const auto& p : tracked) value_walk[p] = 50;
  std::map<std::string, int> injury_left;  // player -> remaining rounds

  for (int round = 0; round < config.rounds; ++round) {
    RoundIncidents truth;
    for (const auto& player : tracked) {
      int v = value_walk[player] + 10 * (rng.Below(3) - 1);
      v = std::clamp(v, 0, 100);
      value_walk[player] = v;
      truth.performances.emplace_back(player, v);
    }
    if (rng.Chance(0.6)) {
      truth.has_card = true;
      truth.card_players.push_back(
          kPlayers[rng.Below(static_cast<int>(kPlayers.size()))]);
      if (rng.Chance(0.25)) {
        // One sentence carrying two card messages.
        std::string second;
        do {
          second = kPlayers[rng.Below(static_cast<int>(kPlayers.size()))];
        } while (second == truth.card_players[0]);
        truth.card_players.push_back(second);
      }
      truth.card_instance = rng.Chance(0.8) ? "yellow_card" : "red_card";
    }
    if (rng.Chance(0.7)) {
      truth.has_scorer = true;
      truth.scorer_player =
          kPlayers[rng.Below(static_cast<int>(kPlayers.size()))];
      truth.scorer_span = kSpans[rng.Below(static_cast<int>(kSpans.size()))];
    }
    // Injury sagas make the injured type span consecutive rounds.
    for (auto it = injury_left.begin(); it != injury_left.end();) {
      if (--it->second <= 0) {
        it = injury_left.erase(it);
      } else {
        ++it;
      }
    }
    if (injury_left.empty() && rng.Chance(0.3)) {
      injury_left[kPlayers[rng.Below(static_cast<int>(kPlayers.size()))]] =
          2 + rng.Below(2);
    }
    for (const auto& [player, _] : injury_left) {
      truth.injured_players.push_back(player);
    }
    truth.winner = kTeams[rng.Below(static_cast<int>(kTeams.size()))];

    for (int s = 0; s < config.sources; ++s) {
      const std::string& source = result.corpus.source_order[s];
      Document doc;
      char round_buf[8];
      std::snprintf(round_buf, sizeof(round_buf), "%02d", round);
      doc.id = std::string("r") + round_buf + "_" + source;
      doc.source = source;
      doc.pub_time = round;

      std::vector<SentenceDraft> drafts;
      for (const auto& [player, value] : truth.performances) {
        // Sources occasionally disagree by one lexicon step.
        int reported = value;
        if (rng.Chance(0.2)) {
          reported = std::clamp(value + (rng.Chance(0.5) ? 10 : -10), 0, 100);
        }
        SentenceDraft d;
        d.type = "performance";
        d.tokens = {RandomCue(rng, "performance"), player, "general",
                    "whole_match", DegreeWord(reported)};
        d.nes = {MakeNe(1, player, "Player"),
                 MakeNe(2, "general", "ActionArea"),
                 MakeNe(3, "whole_match", "WholeMatch")};
        GoldAnnotation g;
        g.type = "performance";
        g.slots = {{"entity", Value::OfInstance(player)},
                   {"in_what", Value::OfInstance("general")},
                   {"time_span", Value::OfInstance("whole_match")},
                   {"value", Value::OfDegree(reported)}};
        d.gold = {g};
        drafts.push_back(std::move(d));
      }
      if (truth.has_card) {
        SentenceDraft d;
        d.type = "card";
        d.tokens = {RandomCue(rng, "card")};
        for (const auto& player : truth.card_players) {
          d.nes.push_back(
              MakeNe(static_cast<int>(d.tokens.size()), player, "Player"));
          d.tokens.push_back(player);
        }
        d.nes.push_back(MakeNe(static_cast<int>(d.tokens.size()),
                               truth.card_instance,
                               truth.card_instance == "yellow_card" ? "Yellow"
                                                                     : "Red"));
        d.tokens.push_back(truth.card_instance);
        for (const auto& player : truth.card_players) {
          GoldAnnotation g;
          g.type = "card";
          g.slots = {{"entity", Value::OfInstance(player)},
                     {"card_type", Value::OfInstance(truth.card_instance)}};
          d.gold.push_back(std::move(g));
        }
        drafts.push_back(std::move(d));
      }
      if (truth.has_scorer) {
        SentenceDraft d;
        d.type = "scorer";
        d.tokens = {RandomCue(rng, "scorer"), truth.scorer_player,
                    truth.scorer_span};
        d.nes = {MakeNe(1, truth.scorer_player, "Player"),
                 MakeNe(2, truth.scorer_span,
                        truth.scorer_span == "first_half" ? "FirstHalf"
                                                          : "SecondHalf")};
        GoldAnnotation g;
        g.type = "scorer";
        g.slots = {{"entity", Value::OfInstance(truth.scorer_player)},
                   {"time_span", Value::OfInstance(truth.scorer_span)}};
        d.gold = {g};
        drafts.push_back(std::move(d));
      }
      {
        SentenceDraft d;
        d.type = "refereeship";
        d.tokens = {RandomCue(rng, "refereeship"), "Dimitriou"};
        d.nes = {MakeNe(1, "Dimitriou", "Referee")};
        GoldAnnotation g;
        g.type = "refereeship";
        g.slots = {{"entity", Value::OfInstance("Dimitriou")}};
        d.gold = {g};
        drafts.push_back(std::move(d));
      }
      for (const auto& player : truth.injured_players) {
        SentenceDraft d;
        d.type = "injured";
        d.tokens = {RandomCue(rng, "injured"), player};
        d.nes = {MakeNe(1, player, "Player")};
        // A report occasionally refers back to the previous round via an
        // annotated temporal expression.
        if (round >= 1 && rng.Chance(0.15)) d.temporal_offset = -1;
        GoldAnnotation g;
        g.type = "injured";
        g.slots = {{"entity", Value::OfInstance(player)}};
        g.temporal_offset = d.temporal_offset;
        d.gold = {g};
        drafts.push_back(std::move(d));
      }
      {
        SentenceDraft d;
        d.type = "win";
        d.tokens = {RandomCue(rng, "win"), truth.winner};
        d.nes = {MakeNe(1, truth.winner, "Team")};
        GoldAnnotation g;
        g.type = "win";
        g.slots = {{"entity", Value::OfInstance(truth.winner)}};
        d.gold = {g};
        drafts.push_back(std::move(d));
      }
      if (rng.Chance(0.4)) {
        SentenceDraft d;
        d.type = "behavior";
        d.tokens = {RandomCue(rng, "behavior"), "home_fans"};
        d.nes = {MakeNe(1, "home_fans", "OrganizedFans")};
        GoldAnnotation g;
        g.type = "behavior";
        g.slots = {{"entity", Value::OfInstance("home_fans")}};
        d.gold = {g};
        drafts.push_back(std::move(d));
      }
      for (int i = 0; i < 2; ++i) {
        SentenceDraft d;
        d.type = SchemaRegistry::kNoneType;
        for (int j = 0; j < 3; ++j) {
          d.tokens.push_back(
              kChatter[rng.Below(static_cast<int>(kChatter.size()))]);
        }
        drafts.push_back(std::move(d));
      }

      // Noise channels, then emission.
      int index = 0;
      for (auto& d : drafts) {
        if (config.noise.drop_sentence > 0.0 &&
            rng.Chance(config.noise.drop_sentence)) {
          continue;
        }
        if (d.type != SchemaRegistry::kNoneType &&
            config.noise.wrong_label > 0.0 &&
            rng.Chance(config.noise.wrong_label)) {
          d.tokens[0] = ForeignCue(rng, d.type);
        }
        if (config.noise.drop_ne > 0.0) {
          std::vector<NeSpan> kept;
          for (auto& ne : d.nes) {
            if (!rng.Chance(config.noise.drop_ne)) kept.push_back(ne);
          }
          d.nes = std::move(kept);
        }
        AnnotatedSentence sentence;
        sentence.index = index++;
        sentence.tokens = std::move(d.tokens);
        sentence.nes = std::move(d.nes);
        sentence.gold = std::move(d.gold);
        sentence.temporal_offset = d.temporal_offset;

        for (const auto& g : sentence.gold) {
          Message msg;
          msg.type = g.type;
          msg.values = g.slots;
          msg.time = ResolveTime(doc.pub_time, g.temporal_offset);
          msg.source = doc.source;
          msg.provenance = {doc.id, {sentence.index}};
          result.gold_messages.push_back(std::move(msg));
        }
        doc.sentences.push_back(std::move(sentence));
      }
      result.corpus.documents.push_back(std::move(doc));
    }
  }

  // Sanity: generated documents must satisfy the schema contracts.
  for (const auto& msg : result.gold_messages) {
    const ValidationReport report = ValidateMessage(msg, registry, ontology);
    if (!report.ok()) {
      throw ValidationError("generator: gold message fails validation: " +
                            report.violations.front());
    }
  }

  result.gold_relations =
      BruteForceRelations(result.gold_messages, specs, ontology,
                          relation_config);
  return result;
}

}  // namespace evogrid
