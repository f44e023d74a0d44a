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

// End-to-end acceptance checks. Each check prints one line; the process
// exits nonzero if any of them fail.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evogrid/argfill.hpp"
#include "evogrid/classifier.hpp"
#include "evogrid/corpus.hpp"
#include "evogrid/evaluation.hpp"
#include "evogrid/grid.hpp"
#include "evogrid/ontology.hpp"
#include "evogrid/relations.hpp"
#include "evogrid/schema.hpp"

using namespace evogrid;

namespace {

constexpr double kTolerance = 1e-4;

int g_failures = 0;

void Report(const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name;
  if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << '\n';
  if (!ok) ++g_failures;
}

std::string ReadPackFile(const char* name) {
  std::ifstream in(std::string(EVOGRID_PACK_DIR) + "/" + name);
  if (!in) {
    std::cerr << "cannot open pack file " << name << '\n';
    std::exit(2);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Pack {
  Ontology onto;
  SchemaRegistry registry;
  std::vector<HeuristicRule> rules;
  std::vector<RelationSpec> specs;

  Pack()
      : onto(Ontology::FromJsonText(ReadPackFile("ontology.json"))),
        registry(
            SchemaRegistry::FromJsonText(ReadPackFile("schemas.json"), onto)),
        rules(LoadRules(ReadPackFile("rules.json"), onto)),
        specs(LoadRelationSpecs(ReadPackFile("relations.json"))) {}
};

// The full extraction pipeline over an annotated corpus: train the
// classifier on the corpus labels, classify every sentence, fill
// arguments, and merge per document.
struct PipelineOutput {
  std::vector<Message> messages;  // complete only
  double classification_accuracy = 0.0;
};

PipelineOutput RunPipeline(const Corpus& corpus, const Pack& pack,
                           const VectorizerConfig& vectorizer) {
  const auto labeled = ToLabeledSentences(corpus);
  const Vocabulary vocab = BuildVocabulary(labeled, vectorizer);
  std::vector<SentenceVector> vectors;
  vectors.reserve(labeled.size());
  for (const auto& s : labeled) {
    vectors.push_back(Vectorize(s, vocab, vectorizer));
  }
  const NBModel model = TrainNB(vectors, 1.0);

  PipelineOutput out;
  std::vector<std::string> gold_labels;
  std::vector<std::string> predicted_labels;
  std::size_t cursor = 0;
  for (const auto& doc : corpus.documents) {
    std::vector<Message> doc_messages;
    for (const auto& sentence : doc.sentences) {
      const std::string predicted = Classify(model, vectors[cursor]).label;
      gold_labels.push_back(labeled[cursor].label);
      predicted_labels.push_back(predicted);
      ++cursor;
      if (predicted == SchemaRegistry::kNoneType) continue;
      const auto filled =
          FillArguments(sentence, predicted, pack.rules, pack.registry,
                        pack.onto, doc.id, doc.pub_time, doc.source);
      doc_messages.insert(doc_messages.end(), filled.begin(), filled.end());
    }
    for (auto& m : MergeSpanning(std::move(doc_messages))) {
      if (!m.IsPartial()) out.messages.push_back(std::move(m));
    }
  }
  out.classification_accuracy = Accuracy(gold_labels, predicted_labels);
  return out;
}

std::vector<std::string> ContentKeys(const std::vector<Message>& messages) {
  std::vector<std::string> keys;
  keys.reserve(messages.size());
  for (const auto& m : messages) keys.push_back(m.ContentKey());
  return keys;
}

std::vector<std::string> RelationKeys(
    const std::vector<RelationInstance>& relations) {
  std::vector<std::string> keys;
  keys.reserve(relations.size());
  for (const auto& r : relations) {
    keys.push_back(r.spec + "|" + r.from.ContentKey() + ">" +
                   r.to.ContentKey());
  }
  return keys;
}

Message MakePerformance(const std::string& player, int value, int time,
                        const std::string& source, const std::string& doc) {
  Message m;
  m.type = "performance";
  m.time = time;
  m.source = source;
  m.values = {{"entity", Value::OfInstance(player)},
              {"in_what", Value::OfInstance("general")},
              {"time_span", Value::OfInstance("whole_match")},
              {"value", Value::OfDegree(value)}};
  m.provenance = {doc, {0}};
  return m;
}

int CountRelations(const std::vector<RelationInstance>& relations,
                   const std::string& name) {
  int n = 0;
  for (const auto& r : relations) {
    if (r.spec == name) ++n;
  }
  return n;
}

std::vector<RelationInstance> RelationsOf(const Pack& pack,
                                          const std::vector<Message>& messages,
                                          const RelationConfig& config = {}) {
  Grid::BuildOptions options;
  options.source_order = {"A", "B", "C"};
  options.include_partial = true;
  return ExtractRelations(Grid::Build(messages, options), pack.specs,
                          pack.onto, config);
}

// --- criteria -------------------------------------------------------------

void CheckMetricConsistency() {
  auto f_of = [](double p, double r) { return 2.0 * p * r / (p + r); };
  bool ok =
      std::abs(f_of(91.1178, 67.7810) - 77.7357) < kTolerance &&
      std::abs(f_of(89.0521, 39.1789) - 54.4168) < kTolerance;

  std::vector<std::string> gold(3735, "x");
  std::vector<std::string> predicted(3735, "x");
  for (std::size_t i = 0; i < 3735 - 2974; ++i) predicted[i] = "y";
  ok = ok && std::abs(Accuracy(gold, predicted) - 79.6252) < kTolerance;

  const Prf empty = ComputePrf({}, {});
  ok = ok && empty.precision == 100.0 && empty.recall == 100.0 &&
       empty.f_measure == 100.0;
  const Prf degenerate = ComputePrf({"a"}, {});
  ok = ok && degenerate.precision == 0.0 && degenerate.degenerate;
  Report("1 metric consistency against reference figures", ok);
}

void CheckConditionTable(const Pack& pack) {
  struct Row {
    std::string name;
    std::vector<Message> messages;
    int expected;
  };
  const std::vector<Row> table = {
      {"Agreement", {MakePerformance("Nalitzis", 50, 0, "A", "dA"),
                     MakePerformance("Nalitzis", 50, 0, "B", "dB")}, 1},
      {"Agreement", {MakePerformance("Nalitzis", 50, 0, "A", "dA"),
                     MakePerformance("Nalitzis", 60, 0, "B", "dB")}, 0},
      {"Near Agreement", {MakePerformance("Nalitzis", 50, 0, "A", "dA"),
                          MakePerformance("Nalitzis", 60, 0, "B", "dB")}, 1},
      {"Near Agreement", {MakePerformance("Nalitzis", 50, 0, "A", "dA"),
                          MakePerformance("Nalitzis", 90, 0, "B", "dB")}, 0},
      {"Disagreement", {MakePerformance("Nalitzis", 50, 0, "A", "dA"),
                        MakePerformance("Nalitzis", 90, 0, "B", "dB")}, 1},
      {"Disagreement", {MakePerformance("Nalitzis", 50, 0, "A", "dA"),
                        MakePerformance("Nalitzis", 50, 0, "B", "dB")}, 0},
      {"Positive Graduation", {MakePerformance("Nalitzis", 50, 0, "A", "d0"),
                               MakePerformance("Nalitzis", 80, 1, "A", "d1")},
       1},
      {"Positive Graduation", {MakePerformance("Nalitzis", 80, 0, "A", "d0"),
                               MakePerformance("Nalitzis", 50, 1, "A", "d1")},
       0},
      {"Negative Graduation", {MakePerformance("Nalitzis", 80, 0, "A", "d0"),
                               MakePerformance("Nalitzis", 50, 1, "A", "d1")},
       1},
      {"Stability", {MakePerformance("Nalitzis", 50, 0, "A", "d0"),
                     MakePerformance("Nalitzis", 50, 1, "A", "d1")}, 1},
      {"Stability", {MakePerformance("Nalitzis", 50, 0, "A", "d0"),
                     MakePerformance("Nalitzis", 60, 1, "A", "d1")}, 0},
      // Different entity: nothing fires.
      {"Agreement", {MakePerformance("Nalitzis", 50, 0, "A", "dA"),
                     MakePerformance("Georgiou", 50, 0, "B", "dB")}, 0},
      // Different rounds fall outside the default synchronic window.
      {"Agreement", {MakePerformance("Nalitzis", 50, 0, "A", "dA"),
                     MakePerformance("Nalitzis", 50, 1, "B", "dB")}, 0},
  };
  bool ok = true;
  std::string detail;
  for (const auto& row : table) {
    const int got = CountRelations(RelationsOf(pack, row.messages), row.name);
    if (got != row.expected) {
      ok = false;
      detail = row.name + ": expected " + std::to_string(row.expected) +
               ", got " + std::to_string(got);
      break;
    }
  }
  Report("2 relation condition table", ok, detail);
}

void CheckWorkedExample(const Pack& pack) {
  const auto relations =
      RelationsOf(pack, {MakePerformance("Nalitzis", 50, 4, "A", "a4"),
                         MakePerformance("Nalitzis", 50, 4, "B", "b4"),
                         MakePerformance("Nalitzis", 100, 5, "A", "a5")});
  const bool ok = relations.size() == 2 &&
                  CountRelations(relations, "Agreement") == 1 &&
                  CountRelations(relations, "Positive Graduation") == 1;
  Report("3 worked example: one agreement, one positive graduation", ok,
         "got " + std::to_string(relations.size()) + " relations");
}

void CheckOracleEquivalence(const Pack& pack) {
  std::mt19937_64 engine(20260826);
  auto below = [&engine](int n) { return static_cast<int>(engine() % n); };
  const std::vector<std::string> players = {"Nalitzis", "Georgiou", "Markou",
                                            "Petrou"};
  const std::vector<std::string> spans = {"whole_match", "first_half",
                                          "second_half"};

  int checked = 0;
  bool ok = true;
  std::string detail;
  for (int window = 0; window <= 3 && ok; ++window) {
    for (int distance = 1; distance <= 3 && ok; ++distance) {
      for (int i = 0; i < 90 && ok; ++i) {
        const int sources = 2 + below(3);
        const int n = 1 + below(200);
        std::vector<Message> messages;
        std::set<std::string> seen;
        for (int k = 0; k < n; ++k) {
          Message m;
          m.time = below(7);
          m.source = std::string(1, static_cast<char>('A' + below(sources)));
          m.provenance = {"doc" + std::to_string(k), {below(4)}};
          switch (below(3)) {
            case 0:
              m = MakePerformance(players[below(4)], 10 * below(11), m.time,
                                  m.source, m.provenance.doc_id);
              if (below(8) == 0) m.values["value"] = Value::Unfilled();
              break;
            case 1:
              m.type = "scorer";
              m.values = {{"entity", Value::OfInstance(players[below(4)])},
                          {"time_span",
                           below(5) == 0
                               ? Value::Unfilled()
                               : Value::OfInstance(spans[below(3)])}};
              break;
            default:
              m.type = "card";
              m.values = {{"entity", Value::OfInstance(players[below(4)])},
                          {"card_type",
                           Value::OfInstance(below(2) == 0 ? "yellow_card"
                                                           : "red_card")}};
              break;
          }
          if (seen.insert(m.IdentityKey()).second) {
            messages.push_back(std::move(m));
          }
        }
        RelationConfig config;
        config.window = window;
        config.max_diachronic_distance = distance;
        Grid::BuildOptions options;
        for (int s = 0; s < sources; ++s) {
          options.source_order.emplace_back(1,
                                            static_cast<char>('A' + s));
        }
        options.include_partial = true;
        const Grid grid = Grid::Build(messages, options);
        const auto from_grid =
            ExtractRelations(grid, pack.specs, pack.onto, config);
        const auto oracle =
            BruteForceRelations(messages, pack.specs, pack.onto, config);
        if (RelationsToJsonText(from_grid) != RelationsToJsonText(oracle)) {
          ok = false;
          detail = "mismatch at window=" + std::to_string(window) +
                   " distance=" + std::to_string(distance) +
                   " case=" + std::to_string(i);
        }
        ++checked;
      }
    }
  }
  ok = ok && checked >= 1000;
  Report("4 grid extraction equals brute-force oracle on " +
             std::to_string(checked) + " random grids",
         ok, detail);
}

void CheckNoiselessPipeline(const Pack& pack) {
  GeneratorConfig config;
  config.seed = 1;
  config.rounds = 30;
  config.sources = 3;
  const auto synthetic =
      GenerateSynthetic(config, pack.registry, pack.onto, pack.specs, {});

  const bool doc_count_ok = synthetic.corpus.documents.size() == 90;
  const auto pipeline = RunPipeline(synthetic.corpus, pack, {});

  const Prf messages = ComputePrf(ContentKeys(synthetic.gold_messages),
                                  ContentKeys(pipeline.messages));

  Grid::BuildOptions options;
  options.source_order = synthetic.corpus.source_order;
  const Grid grid = Grid::Build(pipeline.messages, options);
  const auto relations = ExtractRelations(grid, pack.specs, pack.onto, {});
  const Prf rel_prf = ComputePrf(RelationKeys(synthetic.gold_relations),
                                 RelationKeys(relations));

  const bool ok = doc_count_ok &&
                  std::abs(messages.precision - 100.0) < kTolerance &&
                  std::abs(messages.recall - 100.0) < kTolerance &&
                  std::abs(rel_prf.precision - 100.0) < kTolerance &&
                  std::abs(rel_prf.recall - 100.0) < kTolerance &&
                  std::abs(pipeline.classification_accuracy - 100.0) <
                      kTolerance;
  std::ostringstream detail;
  detail << "messages P=" << messages.precision << " R=" << messages.recall
         << ", relations P=" << rel_prf.precision << " R=" << rel_prf.recall
         << ", acc=" << pipeline.classification_accuracy;
  Report("5 noiseless 90-document pipeline recovers gold exactly", ok,
         detail.str());
}

double MeanMessageF(const Pack& pack, double wrong_label) {
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GeneratorConfig config;
    config.seed = seed;
    config.rounds = 30;
    config.sources = 3;
    config.noise.wrong_label = wrong_label;
    const auto synthetic =
        GenerateSynthetic(config, pack.registry, pack.onto, pack.specs, {});
    const auto pipeline = RunPipeline(synthetic.corpus, pack, {});
    total += ComputePrf(ContentKeys(synthetic.gold_messages),
                        ContentKeys(pipeline.messages))
                 .f_measure;
  }
  return total / 5.0;
}

void CheckNoiseMonotonicity(const Pack& pack) {
  const double f0 = MeanMessageF(pack, 0.0);
  const double f1 = MeanMessageF(pack, 0.1);
  const double f3 = MeanMessageF(pack, 0.3);
  const bool ok = f0 + kTolerance >= f1 && f1 + kTolerance >= f3 &&
                  f0 > f3 && std::abs(f0 - 100.0) < kTolerance;
  std::ostringstream detail;
  detail << "mean F: " << f0 << " -> " << f1 << " -> " << f3;
  Report("6 message F degrades monotonically with label noise", ok,
         detail.str());
}

void CheckCrossValidation(const Pack& pack) {
  // Noiseless: stratified 10-fold CV reaches 100%.
  GeneratorConfig config;
  config.seed = 2;
  config.rounds = 30;
  config.sources = 3;
  const auto clean =
      GenerateSynthetic(config, pack.registry, pack.onto, pack.specs, {});
  const CvReport clean_cv =
      CrossValidate(ToLabeledSentences(clean.corpus), {}, 10, 2, 1.0);
  bool ok = std::abs(clean_cv.mean_accuracy - 100.0) < kTolerance;

  // Under heavy label noise, NE-type features must not hurt on average.
  double with_ne = 0.0;
  double without_ne = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GeneratorConfig noisy = config;
    noisy.seed = seed;
    noisy.noise.wrong_label = 0.3;
    const auto synthetic =
        GenerateSynthetic(noisy, pack.registry, pack.onto, pack.specs, {});
    const auto labeled = ToLabeledSentences(synthetic.corpus);
    VectorizerConfig ne;
    ne.include_ne_types = true;
    VectorizerConfig lexical;
    lexical.include_ne_types = false;
    with_ne += CrossValidate(labeled, ne, 10, seed, 1.0).mean_accuracy;
    without_ne +=
        CrossValidate(labeled, lexical, 10, seed, 1.0).mean_accuracy;
  }
  with_ne /= 5.0;
  without_ne /= 5.0;
  ok = ok && with_ne + kTolerance >= without_ne;
  std::ostringstream detail;
  detail << "clean mean=" << clean_cv.mean_accuracy << ", noisy NE="
         << with_ne << " vs lexical=" << without_ne;
  Report("7 cross-validation: perfect when clean, NE features help when "
         "noisy",
         ok, detail.str());
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool SameTree(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::map<std::string, std::string> left;
  std::map<std::string, std::string> right;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(a)) {
    if (entry.is_regular_file()) {
      left[std::filesystem::relative(entry.path(), a).string()] =
          ReadAll(entry.path());
    }
  }
  for (const auto& entry : std::filesystem::recursive_directory_iterator(b)) {
    if (entry.is_regular_file()) {
      right[std::filesystem::relative(entry.path(), b).string()] =
          ReadAll(entry.path());
    }
  }
  return left == right;
}

void CheckCliDeterminism() {
  const auto base = std::filesystem::temp_directory_path() / "evogrid_accept";
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  const std::string pack = EVOGRID_PACK_DIR;
  auto run = [&](const std::string& out, const std::string& extra) {
    const std::string cmd = std::string(EVOGRID_CLI_PATH) +
                            " pipeline --seed 42 --rounds 8" +
                            " --ontology " + pack + "/ontology.json" +
                            " --schemas " + pack + "/schemas.json" +
                            " --rules " + pack + "/rules.json" +
                            " --relations " + pack + "/relations.json" +
                            " --out " + (base / out).string() + " " + extra +
                            " 2>/dev/null";
    return std::system(cmd.c_str());
  };
  const int r1 = run("run1", "");
  const int r2 = run("run2", "");
  const int r3 = run("run3", "--parallel");
  bool ok = r1 == 0 && r2 == 0 && r3 == 0;
  ok = ok && SameTree(base / "run1", base / "run2");
  ok = ok && ReadAll(base / "run1" / "relations.json") ==
                 ReadAll(base / "run3" / "relations.json");
  ok = ok && ReadAll(base / "run1" / "eval.json") ==
                 ReadAll(base / "run3" / "eval.json");
  Report("8 CLI runs are byte-deterministic, including parallel extraction",
         ok);
  std::filesystem::remove_all(base);
}

void CheckInvariantSuites(const Pack& pack) {
  std::mt19937_64 engine(77);
  auto below = [&engine](int n) { return static_cast<int>(engine() % n); };
  const std::vector<std::string> players = {"Nalitzis", "Georgiou", "Markou",
                                            "Petrou"};
  std::map<std::string, RelationSpec::Axis> axis_of;
  for (const auto& s : pack.specs) axis_of.emplace(s.name, s.axis);

  bool ok = true;
  int cases = 0;
  int instances = 0;
  for (int i = 0; i < 600 && ok; ++i) {
    RelationConfig config;
    config.window = below(3);
    config.max_diachronic_distance = 1 + below(3);
    std::vector<Message> messages;
    std::set<std::string> seen;
    const int n = 1 + below(60);
    for (int k = 0; k < n; ++k) {
      Message m = MakePerformance(
          players[below(4)], 10 * below(11), below(5),
          std::string(1, static_cast<char>('A' + below(3))),
          "doc" + std::to_string(k));
      if (seen.insert(m.IdentityKey()).second) {
        messages.push_back(std::move(m));
      }
    }
    const auto relations =
        BruteForceRelations(messages, pack.specs, pack.onto, config);
    std::set<std::string> keys;
    for (const auto& rel : relations) {
      ++instances;
      if (!keys.insert(rel.Key()).second) ok = false;  // duplicates
      if (axis_of.at(rel.spec) == RelationSpec::Axis::kSynchronic) {
        if (rel.from.source == rel.to.source) ok = false;
        if (std::abs(rel.from.time - rel.to.time) > config.window) ok = false;
      } else {
        if (rel.from.source != rel.to.source) ok = false;
        if (rel.from.time >= rel.to.time) ok = false;
        if (rel.to.time - rel.from.time > config.max_diachronic_distance) {
          ok = false;
        }
      }
      if (rel.from.type != rel.to.type) ok = false;
    }
    ++cases;
  }
  ok = ok && cases >= 500 && instances >= 500;
  Report("9 invariant suite over " + std::to_string(cases) +
             " random grids (" + std::to_string(instances) + " instances)",
         ok);
}

}  // namespace

int main() {
  const Pack pack;
  CheckMetricConsistency();
  CheckConditionTable(pack);
  CheckWorkedExample(pack);
  CheckOracleEquivalence(pack);
  CheckNoiselessPipeline(pack);
  CheckNoiseMonotonicity(pack);
  CheckCrossValidation(pack);
  CheckCliDeterminism();
  CheckInvariantSuites(pack);
  if (g_failures > 0) {
    std::cout << g_failures << " acceptance check(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance checks passed\n";
  return 0;
}
