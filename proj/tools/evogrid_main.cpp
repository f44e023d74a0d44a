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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evogrid/argfill.hpp"
#include "evogrid/classifier.hpp"
#include "evogrid/corpus.hpp"
#include "evogrid/errors.hpp"
#include "evogrid/evaluation.hpp"
#include "evogrid/grid.hpp"
#include "evogrid/ontology.hpp"
#include "evogrid/query.hpp"
#include "evogrid/relations.hpp"
#include "evogrid/schema.hpp"

namespace {

using nlohmann::json;
using namespace evogrid;

struct RunConfig {
  std::string ontology_path;
  std::string schemas_path;
  std::string rules_path;
  std::string relations_path;
  std::string templates_path;
  std::string corpus_manifest;  // empty -> synthetic corpus
  std::string query_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int rounds = 30;
  int sources = 3;
  NoiseConfig noise;
  int folds = 10;
  double alpha = 1.0;
  VectorizerConfig vectorizer;
  RelationConfig relation_config;
  bool include_partial = false;
};

void ApplyConfigFile(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  config.ontology_path = doc.value("ontology", config.ontology_path);
  config.schemas_path = doc.value("schemas", config.schemas_path);
  config.rules_path = doc.value("rules", config.rules_path);
  config.relations_path = doc.value("relations", config.relations_path);
  config.templates_path = doc.value("templates", config.templates_path);
  config.corpus_manifest = doc.value("corpus", config.corpus_manifest);
  config.query_path = doc.value("query", config.query_path);
  config.out_dir = doc.value("out", config.out_dir);
  config.seed = doc.value("seed", config.seed);
  config.rounds = doc.value("rounds", config.rounds);
  config.sources = doc.value("sources", config.sources);
  config.folds = doc.value("folds", config.folds);
  config.alpha = doc.value("alpha", config.alpha);
  if (doc.contains("noise")) {
    const auto& n = doc["noise"];
    config.noise.drop_ne = n.value("drop_ne", config.noise.drop_ne);
    config.noise.wrong_label = n.value("wrong_label", config.noise.wrong_label);
    config.noise.drop_sentence =
        n.value("drop_sentence", config.noise.drop_sentence);
  }
  if (doc.contains("vectorizer")) {
    const auto& v = doc["vectorizer"];
    config.vectorizer.include_ne_types =
        v.value("include_ne_types", config.vectorizer.include_ne_types);
    config.vectorizer.min_frequency =
        v.value("min_frequency", config.vectorizer.min_frequency);
    config.vectorizer.use_stemming =
        v.value("use_stemming", config.vectorizer.use_stemming);
    for (const auto& w : v.value("stopwords", json::array())) {
      config.vectorizer.stopwords.insert(w.get<std::string>());
    }
  }
  if (doc.contains("relation_config")) {
    const auto& r = doc["relation_config"];
    config.relation_config.window =
        r.value("window", config.relation_config.window);
    config.relation_config.max_diachronic_distance = r.value(
        "max_distance", config.relation_config.max_diachronic_distance);
    config.relation_config.default_delta =
        r.value("delta", config.relation_config.default_delta);
    config.relation_config.parallel =
        r.value("parallel", config.relation_config.parallel);
  }
  config.include_partial = doc.value("include_partial", config.include_partial);
}

struct DomainPack {
  Ontology ontology;
  SchemaRegistry registry;
  std::vector<HeuristicRule> rules;
  std::vector<RelationSpec> specs;
};

DomainPack LoadPack(const RunConfig& config) {
  DomainPack pack;
  if (config.ontology_path.empty() || config.schemas_path.empty()) {
    throw ValidationError("ontology and schema paths are required");
  }
  pack.ontology = Ontology::FromFile(config.ontology_path);
  pack.registry = SchemaRegistry::FromFile(config.schemas_path, pack.ontology);
  if (!config.rules_path.empty()) {
    pack.rules = LoadRulesFromFile(config.rules_path, pack.ontology);
  }
  if (!config.relations_path.empty()) {
    pack.specs = LoadRelationSpecsFromFile(config.relations_path);
  }
  return pack;
}

struct CorpusBundle {
  Corpus corpus;
  std::vector<Message> gold_messages;
  std::vector<RelationInstance> gold_relations;
};

CorpusBundle ObtainCorpus(const RunConfig& config, const DomainPack& pack) {
  CorpusBundle bundle;
  if (!config.corpus_manifest.empty()) {
    bundle.corpus = LoadCorpus(config.corpus_manifest, pack.ontology);
    bundle.gold_messages = GoldMessages(bundle.corpus);
    bundle.gold_relations =
        BruteForceRelations(bundle.gold_messages, pack.specs, pack.ontology,
                            config.relation_config);
  } else {
    GeneratorConfig gen;
    gen.seed = config.seed;
    gen.rounds = config.rounds;
    gen.sources = config.sources;
    gen.noise = config.noise;
    SyntheticCorpus synthetic =
        GenerateSynthetic(gen, pack.registry, pack.ontology, pack.specs,
                          config.relation_config);
    bundle.corpus = std::move(synthetic.corpus);
    bundle.gold_messages = std::move(synthetic.gold_messages);
    bundle.gold_relations = std::move(synthetic.gold_relations);
  }
  return bundle;
}

json MessageToJson(const Message& m) {
  json jm;
  jm["type"] = m.type;
  jm["time"] = m.time;
  jm["source"] = m.source;
  json slots = json::object();
  for (const auto& [slot, v] : m.values) slots[slot] = v.ToString();
  jm["slots"] = slots;
  jm["doc"] = m.provenance.doc_id;
  jm["sentences"] = m.provenance.sentences;
  jm["partial"] = m.IsPartial();
  return jm;
}

std::string MessagesToJsonText(const std::vector<Message>& messages) {
  json doc = json::array();
  for (const auto& m : messages) doc.push_back(MessageToJson(m));
  return doc.dump(2);
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

// End-to-end message extraction: train on the corpus annotations, classify
// every sentence, fill arguments, merge spanning candidates per document.
struct ExtractionResult {
  std::vector<Message> messages;  // complete and partial
  std::vector<std::string> gold_labels;
  std::vector<std::string> predicted_labels;
};

ExtractionResult ExtractMessages(const CorpusBundle& bundle,
                                 const DomainPack& pack,
                                 const RunConfig& config) {
  const std::vector<LabeledSentence> labeled =
      ToLabeledSentences(bundle.corpus);
  const Vocabulary vocab = BuildVocabulary(labeled, config.vectorizer);
  std::vector<SentenceVector> vectors;
  vectors.reserve(labeled.size());
  for (const auto& s : labeled) {
    vectors.push_back(Vectorize(s, vocab, config.vectorizer));
  }
  const NBModel model = TrainNB(vectors, config.alpha);

  ExtractionResult result;
  std::size_t sentence_cursor = 0;
  for (const auto& doc : bundle.corpus.documents) {
    std::vector<Message> doc_messages;
    for (const auto& sentence : doc.sentences) {
      const SentenceVector& vec = vectors[sentence_cursor];
      const std::string predicted = Classify(model, vec).label;
      result.gold_labels.push_back(labeled[sentence_cursor].label);
      result.predicted_labels.push_back(predicted);
      ++sentence_cursor;
      if (predicted == SchemaRegistry::kNoneType) continue;
      std::vector<Message> filled =
          FillArguments(sentence, predicted, pack.rules, pack.registry,
                        pack.ontology, doc.id, doc.pub_time, doc.source);
      doc_messages.insert(doc_messages.end(), filled.begin(), filled.end());
    }
    std::vector<Message> merged = MergeSpanning(std::move(doc_messages));
    result.messages.insert(result.messages.end(), merged.begin(),
                           merged.end());
  }
  return result;
}

std::string TypeOnlyKey(const Message& m) {
  return m.type + "@" + std::to_string(m.time) + "@" + m.source;
}

std::string RelationKey(const RelationInstance& r) {
  return r.spec + "|" + r.from.ContentKey() + ">" + r.to.ContentKey();
}

json EvaluateAll(const CorpusBundle& bundle, const ExtractionResult& extracted,
                 const std::vector<RelationInstance>& relations) {
  auto keys = [](const std::vector<Message>& messages, bool type_only,
                 bool skip_partial) {
    std::vector<std::string> out;
    for (const auto& m : messages) {
      if (skip_partial && m.IsPartial()) continue;
      out.push_back(type_only ? TypeOnlyKey(m) : m.ContentKey());
    }
    return out;
  };
  json report;
  const Prf type_prf =
      ComputePrf(keys(bundle.gold_messages, true, false),
                 keys(extracted.messages, true, true));
  const Prf full_prf =
      ComputePrf(keys(bundle.gold_messages, false, false),
                 keys(extracted.messages, false, true));
  std::vector<std::string> gold_rel_keys;
  for (const auto& r : bundle.gold_relations) {
    gold_rel_keys.push_back(RelationKey(r));
  }
  std::vector<std::string> pred_rel_keys;
  for (const auto& r : relations) pred_rel_keys.push_back(RelationKey(r));
  const Prf rel_prf = ComputePrf(gold_rel_keys, pred_rel_keys);

  report["message_types"] = json::parse(PrfToJsonText(type_prf));
  report["messages"] = json::parse(PrfToJsonText(full_prf));
  report["relations"] = json::parse(PrfToJsonText(rel_prf));
  report["classification_accuracy"] =
      Accuracy(extracted.gold_labels, extracted.predicted_labels);
  return report;
}

Query ObtainQuery(const RunConfig& config, const std::string& entity_flag) {
  if (!entity_flag.empty()) {
    Query q;
    q.entities.push_back(entity_flag);
    return q;
  }
  if (config.query_path.empty()) {
    throw ValidationError("query: provide --query FILE or --entity NAME");
  }
  return Query::FromFile(config.query_path);
}

int Dispatch(const std::string& command, const RunConfig& config,
             const std::string& entity_flag) {
  const std::filesystem::path out(config.out_dir);
  const DomainPack pack = LoadPack(config);

  if (command == "gen") {
    CorpusBundle bundle = ObtainCorpus(config, pack);
    WriteCorpus(bundle.corpus, (out / "corpus").string());
    WriteFile(out / "gold_messages.json",
              MessagesToJsonText(bundle.gold_messages));
    WriteFile(out / "gold_relations.json",
              RelationsToJsonText(bundle.gold_relations));
    std::cerr << "generated " << bundle.corpus.documents.size()
              << " documents\n";
    return 0;
  }

  CorpusBundle bundle = ObtainCorpus(config, pack);

  if (command == "train") {
    const std::vector<LabeledSentence> labeled =
        ToLabeledSentences(bundle.corpus);
    const Vocabulary vocab = BuildVocabulary(labeled, config.vectorizer);
    std::vector<SentenceVector> vectors;
    for (const auto& s : labeled) {
      vectors.push_back(Vectorize(s, vocab, config.vectorizer));
    }
    const NBModel model = TrainNB(vectors, config.alpha);
    WriteFile(out / "model.json", model.ToJsonText());
    const CvReport cv = CrossValidate(labeled, config.vectorizer, config.folds,
                                      config.seed, config.alpha);
    WriteFile(out / "cv_report.json", cv.ToJsonText());
    std::cerr << "mean CV accuracy " << cv.mean_accuracy << "%\n";
    return 0;
  }

  const ExtractionResult extracted = ExtractMessages(bundle, pack, config);

  if (command == "extract") {
    WriteFile(out / "messages.json", MessagesToJsonText(extracted.messages));
    return 0;
  }

  Grid::BuildOptions options;
  options.source_order = bundle.corpus.source_order;
  options.include_partial = config.include_partial;
  const Grid grid = Grid::Build(extracted.messages, options);

  if (command == "grid") {
    WriteFile(out / "grid.json", grid.ToJsonText());
    return 0;
  }

  const std::vector<RelationInstance> relations =
      ExtractRelations(grid, pack.specs, pack.ontology, config.relation_config);

  if (command == "relations") {
    WriteFile(out / "relations.json", RelationsToJsonText(relations));
    return 0;
  }

  if (command == "query" || command == "summarize") {
    const Query query = ObtainQuery(config, entity_flag);
    const Subgrid subgrid =
        RunQuery(grid, relations, query, pack.ontology, pack.registry);
    if (command == "query") {
      WriteFile(out / "subgrid.json", subgrid.ToJsonText());
      return 0;
    }
    if (config.templates_path.empty()) {
      throw ValidationError("summarize: --templates is required");
    }
    const TemplatePack templates =
        TemplatePack::FromFile(config.templates_path);
    std::string diagnostics;
    const std::string summary = RenderSummary(
        subgrid, templates, bundle.corpus.source_order, &diagnostics);
    WriteFile(out / "summary.txt", summary);
    std::cout << summary;
    if (!diagnostics.empty()) std::cerr << diagnostics;
    return 0;
  }

  if (command == "eval") {
    const json report = EvaluateAll(bundle, extracted, relations);
    WriteFile(out / "eval.json", report.dump(2));
    return 0;
  }

  if (command == "pipeline") {
    WriteCorpus(bundle.corpus, (out / "corpus").string());
    WriteFile(out / "gold_messages.json",
              MessagesToJsonText(bundle.gold_messages));
    WriteFile(out / "gold_relations.json",
              RelationsToJsonText(bundle.gold_relations));
    WriteFile(out / "messages.json", MessagesToJsonText(extracted.messages));
    WriteFile(out / "grid.json", grid.ToJsonText());
    WriteFile(out / "relations.json", RelationsToJsonText(relations));
    const json report = EvaluateAll(bundle, extracted, relations);
    WriteFile(out / "eval.json", report.dump(2));
    if (!config.query_path.empty() || !entity_flag.empty()) {
      const Query query = ObtainQuery(config, entity_flag);
      const Subgrid subgrid =
          RunQuery(grid, relations, query, pack.ontology, pack.registry);
      WriteFile(out / "subgrid.json", subgrid.ToJsonText());
      if (!config.templates_path.empty()) {
        const TemplatePack templates =
            TemplatePack::FromFile(config.templates_path);
        const std::string summary = RenderSummary(
            subgrid, templates, bundle.corpus.source_order, nullptr);
        WriteFile(out / "summary.txt", summary);
      }
    }
    return 0;
  }

  throw ValidationError("unknown subcommand '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evogrid: cross-document message and relation extraction over "
               "(time x source) grids"};
  app.require_subcommand(1);

  RunConfig config;
  std::string config_path;
  std::string entity_flag;
  std::string ne_features = "on";
  std::string stemming = "off";
  bool parallel = false;

  const std::vector<std::string> commands = {
      "gen",  "train",     "extract",   "grid", "relations",
      "query", "summarize", "eval",      "pipeline"};
  for (const auto& name : commands) {
    app.add_subcommand(name)->fallthrough();
  }
  app.add_option("--config", config_path, "Run configuration file (JSON)");
  app.add_option("--seed", config.seed, "Deterministic seed");
  app.add_option("--ontology", config.ontology_path, "Ontology file");
  app.add_option("--schemas", config.schemas_path, "Message schema file");
  app.add_option("--rules", config.rules_path, "Argument-filling rules file");
  app.add_option("--relations", config.relations_path, "Relation spec file");
  app.add_option("--templates", config.templates_path, "Template pack file");
  app.add_option("--corpus", config.corpus_manifest, "Corpus manifest file");
  app.add_option("--query", config.query_path, "Query file (JSON)");
  app.add_option("--entity", entity_flag, "Shortcut: entity-only query");
  app.add_option("--out", config.out_dir, "Output directory");
  app.add_option("--rounds", config.rounds, "Synthetic corpus rounds");
  app.add_option("--sources", config.sources, "Synthetic corpus sources");
  app.add_option("--window", config.relation_config.window,
                 "Synchronic time window");
  app.add_option("--max-distance",
                 config.relation_config.max_diachronic_distance,
                 "Maximum diachronic distance");
  app.add_option("--ne-features", ne_features, "NE-type features: on|off");
  app.add_option("--stemming", stemming, "Stemming hook: on|off");
  app.add_option("--folds", config.folds, "Cross-validation folds");
  app.add_option("--alpha", config.alpha, "Naive Bayes smoothing");
  app.add_option("--noise-wrong-label", config.noise.wrong_label,
                 "Wrong-label noise probability");
  app.add_option("--noise-drop-ne", config.noise.drop_ne,
                 "NE-drop noise probability");
  app.add_option("--noise-drop-sentence", config.noise.drop_sentence,
                 "Sentence-drop noise probability");
  app.add_flag("--parallel", parallel, "Parallel relation extraction");
  app.add_flag("--include-partial", config.include_partial,
               "Place partial messages in the grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  std::string command;
  for (auto* sub : app.get_subcommands()) command = sub->get_name();

  try {
    if (!config_path.empty()) {
      // The file supplies defaults; flags given on the command line win.
      RunConfig merged;
      ApplyConfigFile(merged, config_path);
      auto keep_flag = [&](const char* name, auto& merged_field,
                           const auto& flag_value) {
        if (app.count(name) > 0) merged_field = flag_value;
      };
      keep_flag("--seed", merged.seed, config.seed);
      keep_flag("--ontology", merged.ontology_path, config.ontology_path);
      keep_flag("--schemas", merged.schemas_path, config.schemas_path);
      keep_flag("--rules", merged.rules_path, config.rules_path);
      keep_flag("--relations", merged.relations_path, config.relations_path);
      keep_flag("--templates", merged.templates_path, config.templates_path);
      keep_flag("--corpus", merged.corpus_manifest, config.corpus_manifest);
      keep_flag("--query", merged.query_path, config.query_path);
      keep_flag("--out", merged.out_dir, config.out_dir);
      keep_flag("--rounds", merged.rounds, config.rounds);
      keep_flag("--sources", merged.sources, config.sources);
      keep_flag("--window", merged.relation_config.window,
                config.relation_config.window);
      keep_flag("--max-distance", merged.relation_config.max_diachronic_distance,
                config.relation_config.max_diachronic_distance);
      keep_flag("--folds", merged.folds, config.folds);
      keep_flag("--alpha", merged.alpha, config.alpha);
      keep_flag("--noise-wrong-label", merged.noise.wrong_label,
                config.noise.wrong_label);
      keep_flag("--noise-drop-ne", merged.noise.drop_ne, config.noise.drop_ne);
      keep_flag("--noise-drop-sentence", merged.noise.drop_sentence,
                config.noise.drop_sentence);
      keep_flag("--include-partial", merged.include_partial,
                config.include_partial);
      if (merged.relation_config.parallel) parallel = true;
      merged.vectorizer = config.vectorizer;
      config = merged;
    }
    if (ne_features != "on" && ne_features != "off") {
      std::cerr << "usage: --ne-features expects on|off\n";
      return 1;
    }
    if (stemming != "on" && stemming != "off") {
      std::cerr << "usage: --stemming expects on|off\n";
      return 1;
    }
    config.vectorizer.include_ne_types = ne_features == "on";
    config.vectorizer.use_stemming = stemming == "on";
    if (parallel) config.relation_config.parallel = true;

    return Dispatch(command, config, entity_flag);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
