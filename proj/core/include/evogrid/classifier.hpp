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

#ifndef EVOGRID_CLASSIFIER_HPP_
#define EVOGRID_CLASSIFIER_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace evogrid {

// Lexical features carry a "w:" prefix and named-entity-type features an
// "NE:" prefix, so the two namespaces can never collide.
inline std::string LexicalFeature(const std::string& token) {
  return "w:" + token;
}
inline std::string NeTypeFeature(const std::string& concept_id) {
  return "NE:" + concept_id;
}

struct VectorizerConfig {
  bool use_stemming = false;
  bool include_ne_types = true;
  // Tokens with corpus frequency below this are dropped (default keeps
  // frequency >= 5, i.e. removes words appearing four times or less).
  int min_frequency = 5;
  std::set<std::string> stopwords;
  // Binary presence instead of counts; multinomial counts by default.
  bool binary_counts = false;
  // Pluggable stemmer hook; identity when unset.
  std::function<std::string(const std::string&)> stemmer;

  std::string ApplyStemmer(const std::string& token) const {
    return (use_stemming && stemmer) ? stemmer(token) : token;
  }
};

// One sentence as the classifier sees it: surface tokens, the ontology
// concepts of its named entities, and the gold message type (or None).
struct LabeledSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> ne_concepts;
  std::string label;
};

using Vocabulary = std::set<std::string>;

// Lexical tokens passing the frequency and stopword filters, plus all
// NE-type features seen in the corpus when include_ne_types is on.
Vocabulary BuildVocabulary(const std::vector<LabeledSentence>& corpus,
                           const VectorizerConfig& config);

struct SentenceVector {
  std::map<std::string, int> features;  // feature id -> count
  std::string label;
};

SentenceVector Vectorize(const LabeledSentence& sentence,
                         const Vocabulary& vocabulary,
                         const VectorizerConfig& config);

// Multinomial naive Bayes with additive smoothing.
struct NBModel {
  std::map<std::string, double> priors;
  // label -> feature id -> smoothed likelihood.
  std::map<std::string, std::map<std::string, double>> likelihoods;
  Vocabulary vocabulary;
  double alpha = 1.0;

  std::string ToJsonText() const;
  static NBModel FromJsonText(const std::string& text);
};

NBModel TrainNB(const std::vector<SentenceVector>& vectors,
                double alpha = 1.0);

struct Classification {
  std::string label;
  // Normalized posteriors, summing to 1 over labels with nonzero prior.
  std::map<std::string, double> posteriors;
};

// Argmax over log posteriors; exact ties break to the lexicographically
// smallest label.
Classification Classify(const NBModel& model, const SentenceVector& vector);

struct CvReport {
  std::vector<double> fold_accuracy;  // percent, fold order
  double mean_accuracy = 0.0;
  std::vector<std::vector<std::size_t>> test_folds;  // sentence indexes

  std::string ToJsonText() const;
};

// Stratified k-fold cross-validation. The vocabulary is rebuilt on each
// training split so no test token leaks into the feature space.
CvReport CrossValidate(const std::vector<LabeledSentence>& corpus,
                       const VectorizerConfig& config, int k = 10,
                       std::uint64_t seed = 0, double alpha = 1.0);

}  // namespace evogrid

#endif  // EVOGRID_CLASSIFIER_HPP_
