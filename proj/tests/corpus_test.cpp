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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "evogrid/errors.hpp"

using namespace evogrid;

namespace {

std::string ReadPackFile(const char* name) {
  std::ifstream in(std::string(EVOGRID_PACK_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Fixture {
  Ontology onto;
  SchemaRegistry registry;
  std::vector<RelationSpec> specs;

  Fixture()
      : onto(Ontology::FromJsonText(ReadPackFile("ontology.json"))),
        registry(
            SchemaRegistry::FromJsonText(ReadPackFile("schemas.json"), onto)),
        specs(LoadRelationSpecs(ReadPackFile("relations.json"))) {}
};

GeneratorConfig SmallGen(std::uint64_t seed) {
  GeneratorConfig config;
  config.seed = seed;
  config.rounds = 2;
  config.sources = 3;
  return config;
}

}  // namespace

TEST_CASE("corpus: document json round trip is exact") {
  const Fixture f;
  const SyntheticCorpus synthetic =
      GenerateSynthetic(SmallGen(11), f.registry, f.onto, f.specs, {});
  for (const auto& doc : synthetic.corpus.documents) {
    const std::string text = DocumentToJsonText(doc);
    const Document restored = DocumentFromJsonText(text, f.onto);
    CHECK(DocumentToJsonText(restored) == text);
  }
}

TEST_CASE("corpus: write and reload through the manifest") {
  const Fixture f;
  const SyntheticCorpus synthetic =
      GenerateSynthetic(SmallGen(12), f.registry, f.onto, f.specs, {});
  const auto dir =
      std::filesystem::temp_directory_path() / "evogrid_corpus_test";
  std::filesystem::remove_all(dir);
  WriteCorpus(synthetic.corpus, dir.string());
  const Corpus reloaded = LoadCorpus((dir / "manifest.json").string(), f.onto);
  CHECK(reloaded.source_order == synthetic.corpus.source_order);
  REQUIRE(reloaded.documents.size() == synthetic.corpus.documents.size());
  for (std::size_t i = 0; i < reloaded.documents.size(); ++i) {
    CHECK(DocumentToJsonText(reloaded.documents[i]) ==
          DocumentToJsonText(synthetic.corpus.documents[i]));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("corpus: loader rejects broken inputs") {
  const Fixture f;
  CHECK_THROWS_AS(DocumentFromJsonText("not json", f.onto), ParseError);
  CHECK_THROWS_AS(DocumentFromJsonText(R"({"id": "d", "source": "A",
    "pub_time": 0, "sentences": [
      {"index": 1, "tokens": ["x"]}]})",
                                       f.onto),
                  ValidationError);
  CHECK_THROWS_AS(DocumentFromJsonText(R"({"id": "d", "source": "A",
    "pub_time": 0, "sentences": [
      {"index": 0, "tokens": ["x"], "nes": [
        {"span": [0, 1], "instance": "x", "concept": "NoSuch"}]}]})",
                                       f.onto),
                  ValidationError);
}

TEST_CASE("generator: same seed, same corpus; different seed differs") {
  const Fixture f;
  const auto a = GenerateSynthetic(SmallGen(5), f.registry, f.onto, f.specs,
                                   {});
  const auto b = GenerateSynthetic(SmallGen(5), f.registry, f.onto, f.specs,
                                   {});
  const auto c = GenerateSynthetic(SmallGen(6), f.registry, f.onto, f.specs,
                                   {});
  REQUIRE(a.corpus.documents.size() == b.corpus.documents.size());
  bool all_equal = true;
  bool any_differs_from_c = a.corpus.documents.size() !=
                            c.corpus.documents.size();
  for (std::size_t i = 0; i < a.corpus.documents.size(); ++i) {
    if (DocumentToJsonText(a.corpus.documents[i]) !=
        DocumentToJsonText(b.corpus.documents[i])) {
      all_equal = false;
    }
    if (!any_differs_from_c &&
        DocumentToJsonText(a.corpus.documents[i]) !=
            DocumentToJsonText(c.corpus.documents[i])) {
      any_differs_from_c = true;
    }
  }
  CHECK(all_equal);
  CHECK(any_differs_from_c);
}

TEST_CASE("generator: structure matches its configuration") {
  const Fixture f;
  GeneratorConfig config = SmallGen(3);
  config.rounds = 4;
  config.sources = 2;
  const auto synthetic =
      GenerateSynthetic(config, f.registry, f.onto, f.specs, {});
  CHECK(synthetic.corpus.documents.size() == 8);
  CHECK(synthetic.corpus.source_order == std::vector<std::string>{"A", "B"});
  std::set<std::string> ids;
  for (const auto& doc : synthetic.corpus.documents) {
    CHECK(ids.insert(doc.id).second);
    CHECK(doc.pub_time >= 0);
    CHECK(doc.pub_time < 4);
  }
}

TEST_CASE("generator: gold annotations align with labeled sentences") {
  const Fixture f;
  const auto synthetic =
      GenerateSynthetic(SmallGen(9), f.registry, f.onto, f.specs, {});
  const auto labeled = ToLabeledSentences(synthetic.corpus);
  std::size_t expected = 0;
  for (const auto& doc : synthetic.corpus.documents) {
    expected += doc.sentences.size();
  }
  CHECK(labeled.size() == expected);
  // Gold messages and gold-typed sentences agree in number except for
  // multi-message sentences, so gold count >= non-None sentence count.
  std::size_t non_none = 0;
  for (const auto& s : labeled) {
    if (s.label != SchemaRegistry::kNoneType) ++non_none;
  }
  CHECK(synthetic.gold_messages.size() >= non_none);
  CHECK(GoldMessages(synthetic.corpus).size() ==
        synthetic.gold_messages.size());
}

TEST_CASE("generator: rejects bad configuration") {
  const Fixture f;
  GeneratorConfig bad = SmallGen(1);
  bad.rounds = 0;
  CHECK_THROWS_AS(GenerateSynthetic(bad, f.registry, f.onto, f.specs, {}),
                  ValidationError);
  GeneratorConfig bad_noise = SmallGen(1);
  bad_noise.noise.wrong_label = 1.5;
  CHECK_THROWS_AS(
      GenerateSynthetic(bad_noise, f.registry, f.onto, f.specs, {}),
      ValidationError);
}

TEST_CASE("generator: noise channels thin the corpus") {
  const Fixture f;
  GeneratorConfig noisy = SmallGen(4);
  noisy.rounds = 10;
  noisy.noise.drop_sentence = 0.5;
  GeneratorConfig base = SmallGen(4);
  base.rounds = 10;
  const auto full = GenerateSynthetic(base, f.registry, f.onto, f.specs, {});
  const auto thinned =
      GenerateSynthetic(noisy, f.registry, f.onto, f.specs, {});
  auto count = [](const Corpus& c) {
    std::size_t n = 0;
    for (const auto& d : c.documents) n += d.sentences.size();
    return n;
  };
  CHECK(count(thinned.corpus) < count(full.corpus));
}
