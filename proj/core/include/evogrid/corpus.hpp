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

#ifndef EVOGRID_CORPUS_HPP_
#define EVOGRID_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "evogrid/argfill.hpp"
#include "evogrid/classifier.hpp"
#include "evogrid/ontology.hpp"
#include "evogrid/relations.hpp"
#include "evogrid/schema.hpp"

namespace evogrid {

struct Document {
  std::string id;
  std::string source;
  int pub_time = 0;
  std::vector<AnnotatedSentence> sentences;
};

struct Corpus {
  std::vector<Document> documents;
  // First-seen order from the manifest; fixes grid source ordering.
  std::vector<std::string> source_order;
};

// Reads a manifest ({"sources": [...], "documents": [paths]}) and its
// document files. Validates NE concept references, duplicate document ids
// and sentence index contiguity.
Corpus LoadCorpus(const std::string& manifest_path, const Ontology& ontology);

std::string DocumentToJsonText(const Document& doc);
Document DocumentFromJsonText(const std::string& text,
                              const Ontology& ontology);

// Writes one JSON file per document plus manifest.json into `directory`.
void WriteCorpus(const Corpus& corpus, const std::string& directory);

// Gold messages carried by the documents' annotations, with times resolved
// against publication time and any temporal offsets.
std::vector<Message> GoldMessages(const Corpus& corpus);

// Labeled sentences for the classifier (label = gold type, or None).
// Sentences holding several gold messages take the first one's type.
std::vector<LabeledSentence> ToLabeledSentences(const Corpus& corpus);

struct NoiseConfig {
  double drop_ne = 0.0;
  double wrong_label = 0.0;  // cue words swapped for another type's
  double drop_sentence = 0.0;
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int rounds = 30;
  int sources = 3;
  NoiseConfig noise;
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<Message> gold_messages;
  std::vector<RelationInstance> gold_relations;
};

// Deterministic multi-source championship corpus: one document per source
// per round, sentences realized from per-type templates with disjoint cue
// vocabularies, gold messages by construction and gold relations computed
// with the brute-force matcher.
SyntheticCorpus GenerateSynthetic(const GeneratorConfig& config,
                                  const SchemaRegistry& registry,
                                  const Ontology& ontology,
                                  const std::vector<RelationSpec>& specs,
                                  const RelationConfig& relation_config);

// Degree lexicon shared between the generator and the bundled football
// rules (word form for each multiple of ten on the 0-100 scale).
const std::vector<std::pair<std::string, int>>& DegreeLexicon();

}  // namespace evogrid

#endif  // EVOGRID_CORPUS_HPP_
