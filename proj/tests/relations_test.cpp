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

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "evogrid/errors.hpp"
#include "evogrid/grid.hpp"
#include "evogrid/ontology.hpp"

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
  std::vector<RelationSpec> specs;

  Fixture()
      : onto(Ontology::FromJsonText(ReadPackFile("ontology.json"))),
        specs(LoadRelationSpecs(ReadPackFile("relations.json"))) {}
};

Message Performance(const std::string& player, int value, int time,
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

Message Scorer(const std::string& player, const std::string& span, int time,
               const std::string& source, const std::string& doc) {
  Message m;
  m.type = "scorer";
  m.time = time;
  m.source = source;
  m.values = {{"entity", Value::OfInstance(player)},
              {"time_span", span.empty() ? Value::Unfilled()
                                         : Value::OfInstance(span)}};
  m.provenance = {doc, {1}};
  return m;
}

std::vector<RelationInstance> Run(const Fixture& f,
                                  const std::vector<Message>& messages,
                                  const RelationConfig& config = {}) {
  Grid::BuildOptions options;
  options.source_order = {"A", "B", "C"};
  options.include_partial = true;
  const Grid grid = Grid::Build(messages, options);
  return ExtractRelations(grid, f.specs, f.onto, config);
}

int Count(const std::vector<RelationInstance>& relations,
          const std::string& name) {
  int n = 0;
  for (const auto& r : relations) {
    if (r.spec == name) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("relations: worked example - agreement then improvement") {
  // Two sources agree on a round-n performance of 50; the next round one
  // of them reports 100.
  const Fixture f;
  const int n = 4;
  const auto relations =
      Run(f, {Performance("Nalitzis", 50, n, "A", "a_n"),
              Performance("Nalitzis", 50, n, "B", "b_n"),
              Performance("Nalitzis", 100, n + 1, "A", "a_n1")});
  CHECK(relations.size() == 2);
  REQUIRE(Count(relations, "Agreement") == 1);
  REQUIRE(Count(relations, "Positive Graduation") == 1);
  for (const auto& r : relations) {
    if (r.spec == "Agreement") {
      CHECK(r.from.source == "A");
      CHECK(r.to.source == "B");
      CHECK(r.from.time == n);
    } else {
      CHECK(r.from.time == n);
      CHECK(r.to.time == n + 1);
      CHECK(r.from.source == "A");
    }
  }
}

TEST_CASE("relations: diachronic value comparisons") {
  const Fixture f;
  auto run_pair = [&](int v0, int v1) {
    return Run(f, {Performance("Nalitzis", v0, 0, "A", "d0"),
                   Performance("Nalitzis", v1, 1, "A", "d1")});
  };
  CHECK(Count(run_pair(50, 80), "Positive Graduation") == 1);
  CHECK(Count(run_pair(50, 80), "Negative Graduation") == 0);
  CHECK(Count(run_pair(80, 50), "Negative Graduation") == 1);
  CHECK(Count(run_pair(50, 50), "Stability") == 1);
  CHECK(Count(run_pair(50, 50), "Positive Graduation") == 0);
}

TEST_CASE("relations: diachronic pairs bind earlier to later, same source") {
  const Fixture f;
  // Different sources never pair diachronically.
  const auto cross = Run(f, {Performance("Nalitzis", 50, 0, "A", "d0"),
                             Performance("Nalitzis", 80, 1, "B", "d1")});
  CHECK(Count(cross, "Positive Graduation") == 0);

  // Distance beyond the maximum does not pair.
  const auto far = Run(f, {Performance("Nalitzis", 50, 0, "A", "d0"),
                           Performance("Nalitzis", 80, 2, "A", "d2")});
  CHECK(Count(far, "Positive Graduation") == 0);

  RelationConfig wide;
  wide.max_diachronic_distance = 2;
  const auto far_ok = Run(f,
                          {Performance("Nalitzis", 50, 0, "A", "d0"),
                           Performance("Nalitzis", 80, 2, "A", "d2")},
                          wide);
  CHECK(Count(far_ok, "Positive Graduation") == 1);
}

TEST_CASE("relations: synchronic window widens the time band") {
  const Fixture f;
  const std::vector<Message> messages = {
      Performance("Nalitzis", 50, 0, "A", "d0"),
      Performance("Nalitzis", 50, 1, "B", "d1"),
  };
  CHECK(Count(Run(f, messages), "Agreement") == 0);  // default window 0
  RelationConfig wide;
  wide.window = 1;
  CHECK(Count(Run(f, messages, wide), "Agreement") == 1);
}

TEST_CASE("relations: each unordered synchronic pair appears once") {
  const Fixture f;
  const auto relations = Run(f, {Performance("Nalitzis", 50, 0, "A", "dA"),
                                 Performance("Nalitzis", 50, 0, "B", "dB"),
                                 Performance("Nalitzis", 50, 0, "C", "dC")});
  CHECK(Count(relations, "Agreement") == 3);  // AB, AC, BC
  for (const auto& r : relations) {
    CHECK(r.from.source < r.to.source);  // canonical order
  }
}

TEST_CASE("relations: near agreement needs a small nonzero gap") {
  const Fixture f;
  auto pair_at = [&](int va, int vb) {
    return Run(f, {Performance("Nalitzis", va, 0, "A", "dA"),
                   Performance("Nalitzis", vb, 0, "B", "dB")});
  };
  CHECK(Count(pair_at(50, 50), "Near Agreement") == 0);  // equal is Agreement
  CHECK(Count(pair_at(50, 60), "Near Agreement") == 1);
  CHECK(Count(pair_at(50, 80), "Near Agreement") == 0);  // beyond delta
  CHECK(Count(pair_at(50, 80), "Disagreement") == 1);
  CHECK(Count(pair_at(50, 50), "Disagreement") == 0);
}

TEST_CASE("relations: predicates never hold on UNFILLED slots") {
  const Fixture f;
  Message broken = Performance("Nalitzis", 50, 0, "A", "dA");
  broken.values["value"] = Value::Unfilled();
  const auto relations =
      Run(f, {broken, Performance("Nalitzis", 50, 0, "B", "dB")});
  CHECK(Count(relations, "Agreement") == 0);
  CHECK(Count(relations, "Disagreement") == 0);
}

TEST_CASE("relations: subsumption relations are strict") {
  const Fixture f;
  // whole_match strictly subsumes first_half; equal spans do not count.
  const auto general = Run(f, {Scorer("Petrou", "whole_match", 0, "A", "dA"),
                               Scorer("Petrou", "first_half", 0, "B", "dB")});
  CHECK(Count(general, "Generalization") == 1);
  CHECK(Count(general, "Preciseness") == 0);

  const auto precise = Run(f, {Scorer("Petrou", "first_half", 0, "A", "dA"),
                               Scorer("Petrou", "whole_match", 0, "B", "dB")});
  CHECK(Count(precise, "Preciseness") == 1);
  CHECK(Count(precise, "Generalization") == 0);

  const auto equal = Run(f, {Scorer("Petrou", "first_half", 0, "A", "dA"),
                             Scorer("Petrou", "first_half", 0, "B", "dB")});
  CHECK(Count(equal, "Generalization") == 0);
  CHECK(Count(equal, "Preciseness") == 0);
}

TEST_CASE("relations: elaboration requires strict one-sided extra fill") {
  const Fixture f;
  const auto rel = Run(f, {Scorer("Petrou", "", 0, "A", "dA"),
                           Scorer("Petrou", "first_half", 0, "B", "dB")});
  CHECK(Count(rel, "Elaboration") == 1);

  // Both fully filled: no elaboration.
  const auto full = Run(f, {Scorer("Petrou", "first_half", 0, "A", "dA"),
                            Scorer("Petrou", "first_half", 0, "B", "dB")});
  CHECK(Count(full, "Elaboration") == 0);

  // Shared slots must agree.
  const auto conflict = Run(f, {Scorer("Petrou", "", 0, "A", "dA"),
                                Scorer("Markou", "first_half", 0, "B", "dB")});
  CHECK(Count(conflict, "Elaboration") == 0);
}

TEST_CASE("relations: spec loader validates axis invariants") {
  CHECK_THROWS_AS(LoadRelationSpecs(R"({"specs": [
    {"name": "bad", "axis": "synchronic", "message_type": "x",
     "temporal_distance": 1}]})"),
                  ValidationError);
  CHECK_THROWS_AS(LoadRelationSpecs(R"({"specs": [
    {"name": "bad", "axis": "diachronic", "message_type": "x",
     "source_condition": "different"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(LoadRelationSpecs(R"({"specs": [
    {"name": "bad", "axis": "sideways", "message_type": "x"}]})"),
                  ParseError);
}

TEST_CASE("relations: serial and parallel extraction agree byte-for-byte") {
  const Fixture f;
  std::vector<Message> messages;
  for (int t = 0; t < 6; ++t) {
    for (const std::string source : {"A", "B", "C"}) {
      messages.push_back(Performance("Nalitzis", 10 * (t % 3 + 3), t, source,
                                     "d" + std::to_string(t) + source));
    }
  }
  RelationConfig serial;
  RelationConfig parallel;
  parallel.parallel = true;
  const auto a = Run(f, messages, serial);
  const auto b = Run(f, messages, parallel);
  CHECK(RelationsToJsonText(a) == RelationsToJsonText(b));
}
