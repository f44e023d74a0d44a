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

#include "evogrid/evaluation.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

#include "evogrid/errors.hpp"

namespace evogrid {

Prf ComputePrf(const std::vector<std::string>& gold_keys,
               const std::vector<std::string>& predicted_keys) {
  Prf result;
  if (gold_keys.empty() && predicted_keys.empty()) {
    result.precision = result.recall = result.f_measure = 100.0;
    return result;
  }

  std::map<std::string, std::size_t> gold_count;
  for (const auto& k : gold_keys) ++gold_count[k];
  std::size_t matched = 0;
  std::map<std::string, std::size_t> used;
  for (const auto& k : predicted_keys) {
    auto it = gold_count.find(k);
    if (it != gold_count.end() && used[k] < it->second) {
      ++used[k];
      ++matched;
    }
  }

  if (predicted_keys.empty() || gold_keys.empty()) result.degenerate = true;
  result.precision =
      predicted_keys.empty() ? 0.0 : 100.0 * matched / predicted_keys.size();
  result.recall =
      gold_keys.empty() ? 0.0 : 100.0 * matched / gold_keys.size();
  const double pr = result.precision + result.recall;
  result.f_measure =
      pr > 0.0 ? 2.0 * result.precision * result.recall / pr : 0.0;
  return result;
}

double Accuracy(const std::vector<std::string>& gold,
                const std::vector<std::string>& predicted) {
  if (gold.size() != predicted.size()) {
    throw ValidationError("accuracy: sequence length mismatch");
  }
  if (gold.empty()) {
    throw ValidationError("accuracy: empty input");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == predicted[i]) ++correct;
  }
  return 100.0 * correct / gold.size();
}

std::string PrfToJsonText(const Prf& prf) {
  nlohmann::json doc;
  doc["precision"] = prf.precision;
  doc["recall"] = prf.recall;
  doc["f_measure"] = prf.f_measure;
  doc["degenerate"] = prf.degenerate;
  return doc.dump(2);
}

}  // namespace evogrid
