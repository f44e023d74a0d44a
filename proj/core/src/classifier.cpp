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

#include "evogrid/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"

#include "evogrid/errors.hpp"

namespace evogrid {

using nlohmann::json;

Vocabulary BuildVocabulary(const std::vector<LabeledSentence>& corpus,
                           const VectorizerConfig& config) {
  if (config.min_frequency < 1) {
    throw ValidationError("vectorizer: min_frequency must be >= 1");
  }
  std::map<std::string, int> frequency;
  Vocabulary vocab;
  for (const auto& sentence : corpus) {
    for (const auto& raw : sentence.tokens) {
      const std::string token = config.ApplyStemmer(raw);
      if (config.stopwords.count(token)) continue;
      ++frequency[token];
    }
    if (config.include_ne_types) {
      for (const auto& concept_id : sentence.ne_concepts) {
        vocab.insert(NeTypeFeature(concept_id));
      }
    }
  }
  for (const auto& [token, count] : frequency) {
    if (count >= config.min_frequency) vocab.insert(LexicalFeature(token));
  }
  return vocab;
}

SentenceVector Vectorize(const LabeledSentence& sentence,
                         const Vocabulary& vocabulary,
                         const VectorizerConfig& config) {
  SentenceVector vec;
  vec.label = sentence.label;
  for (const auto& raw : sentence.tokens) {
    const std::string feature = LexicalFeature(config.ApplyStemmer(raw));
    if (vocabulary.count(feature)) ++vec.features[feature];
  }
  if (config.include_ne_types) {
    for (const auto& concept_id : sentence.ne_concepts) {
      const std::string feature = NeTypeFeature(concept_id);
      if (vocabulary.count(feature)) ++vec.features[feature];
    }
  }
  if (config.binary_counts) {
    for (auto& [_, count] : vec.features) count = 1;
  }
  return vec;
}

NBModel TrainNB(const std::vector<SentenceVector>& vectors, double alpha) {
  if (vectors.empty()) {
    throw ValidationError("train_nb: empty training set");
  }
  NBModel model;
  model.alpha = alpha;

  std::map<std::string, int> class_count;
  std::map<std::string, std::map<std::string, long long>> feature_count;
  std::map<std::string, long long> class_total;
  for (const auto& vec : vectors) {
    ++class_count[vec.label];
    for (const auto& [feature, count] : vec.features) {
      model.vocabulary.insert(feature);
      feature_count[vec.label][feature] += count;
      class_total[vec.label] += count;
    }
  }

  const double n = static_cast<double>(vectors.size());
  const double v = static_cast<double>(model.vocabulary.size());
  for (const auto& [label, count] : class_count) {
    model.priors[label] = count / n;
    const double denominator = class_total[label] + alpha * v;
    auto& row = model.likelihoods[label];
    for (const auto& feature : model.vocabulary) {
      long long numerator_count = 0;
      auto it = feature_count[label].find(feature);
      if (it != feature_count[label].end()) numerator_count = it->second;
      row[feature] =
          denominator > 0 ? (numerator_count + alpha) / denominator : 0.0;
    }
  }
  return model;
}

Classification Classify(const NBModel& model, const SentenceVector& vector) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::map<std::string, double> log_scores;
  for (const auto& [label, prior] : model.priors) {
    if (prior <= 0.0) {
      log_scores[label] = kNegInf;
      continue;
    }
    double score = std::log(prior);
    const auto& row = model.likelihoods.at(label);
    for (const auto& [feature, count] : vector.features) {
      auto it = row.find(feature);
      if (it == row.end()) continue;  // out-of-vocabulary
      if (it->second <= 0.0) {
        score = kNegInf;  // alpha = 0 with unseen feature
        break;
      }
      score += count * std::log(it->second);
    }
    log_scores[label] = score;
  }

  // log-sum-exp normalization.
  double max_score = kNegInf;
  for (const auto& [_, s] : log_scores) max_score = std::max(max_score, s);

  Classification result;
  if (max_score == kNegInf) {
    // Every class got a zero posterior; fall back to the priors.
    for (const auto& [label, prior] : model.priors) {
      result.posteriors[label] = prior;
    }
  } else {
    double z = 0.0;
    for (const auto& [_, s] : log_scores) {
      if (s != kNegInf) z += std::exp(s - max_score);
    }
    for (const auto& [label, s] : log_scores) {
      result.posteriors[label] =
          s == kNegInf ? 0.0 : std::exp(s - max_score) / z;
    }
  }

  double best = -1.0;
  for (const auto& [label, p] : result.posteriors) {
    if (p > best) {  // map order makes ties lexicographically smallest
      best = p;
      result.label = label;
    }
  }
  return result;
}

std::string NBModel::ToJsonText() const {
  json doc;
  doc["alpha"] = alpha;
  doc["priors"] = priors;
  doc["likelihoods"] = likelihoods;
  doc["vocabulary"] = vocabulary;
  return doc.dump(2);
}

NBModel NBModel::FromJsonText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("nb model: ") + e.what());
  }
  NBModel model;
  model.alpha = doc.at("alpha").get<double>();
  model.priors = doc.at("priors").get<std::map<std::string, double>>();
  model.likelihoods =
      doc.at("likelihoods")
          .get<std::map<std::string, std::map<std::string, double>>>();
  for (const auto& f : doc.at("vocabulary")) {
    model.vocabulary.insert(f.get<std::string>());
  }
  return model;
}

std::string CvReport::ToJsonText() const {
  json doc;
  doc["fold_accuracy"] = fold_accuracy;
  doc["mean_accuracy"] = mean_accuracy;
  json folds = json::array();
  for (const auto& fold : test_folds) folds.push_back(fold);
  doc["test_folds"] = folds;
  return doc.dump(2);
}

CvReport CrossValidate(const std::vector<LabeledSentence>& corpus,
                       const VectorizerConfig& config, int k,
                       std::uint64_t seed, double alpha) {
  if (k < 2) throw ValidationError("cross_validate: k must be >= 2");
  if (corpus.size() < static_cast<std::size_t>(k)) {
    throw ValidationError("cross_validate: fewer sentences than folds");
  }

  // Stratified assignment: shuffle each label's indexes, deal round-robin.
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_label[corpus[i].label].push_back(i);
  }
  std::mt19937_64 rng(seed);
  CvReport report;
  report.test_folds.assign(k, {});
  std::size_t dealt = 0;
  for (auto& [_, indexes] : by_label) {
    std::shuffle(indexes.begin(), indexes.end(), rng);
    for (std::size_t i = 0; i < indexes.size(); ++i, ++dealt) {
      report.test_folds[dealt % k].push_back(indexes[i]);
    }
  }
  for (auto& fold : report.test_folds) std::sort(fold.begin(), fold.end());

  double accuracy_sum = 0.0;
  for (int fold = 0; fold < k; ++fold) {
    std::vector<bool> in_test(corpus.size(), false);
    for (std::size_t i : report.test_folds[fold]) in_test[i] = true;

    std::vector<LabeledSentence> train_sentences;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!in_test[i]) train_sentences.push_back(corpus[i]);
    }
    const Vocabulary vocab = BuildVocabulary(train_sentences, config);
    std::vector<SentenceVector> train_vectors;
    train_vectors.reserve(train_sentences.size());
    for (const auto& s : train_sentences) {
      train_vectors.push_back(Vectorize(s, vocab, config));
    }
    const NBModel model = TrainNB(train_vectors, alpha);

    std::size_t correct = 0;
    for (std::size_t i : report.test_folds[fold]) {
      const SentenceVector vec = Vectorize(corpus[i], vocab, config);
      if (Classify(model, vec).label == corpus[i].label) ++correct;
    }
    const double accuracy = report.test_folds[fold].empty()
                                ? 100.0
                                : 100.0 * correct /
                                      report.test_folds[fold].size();
    report.fold_accuracy.push_back(accuracy);
    accuracy_sum += accuracy;
  }
  report.mean_accuracy = accuracy_sum / k;
  return report;
}

}  // namespace evogrid
