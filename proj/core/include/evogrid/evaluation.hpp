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

#ifndef EVOGRID_EVALUATION_HPP_
#define EVOGRID_EVALUATION_HPP_

#include <string>
#include <vector>

namespace evogrid {

// Percentages on a 0-100 scale.
struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  // Set when the predicted (or gold) side was empty while the other was
  // not, making the corresponding ratio 0 by convention.
  bool degenerate = false;
};

// Multiset one-to-one matching on opaque keys. Both sides empty scores
// P = R = F = 100.
Prf ComputePrf(const std::vector<std::string>& gold_keys,
               const std::vector<std::string>& predicted_keys);

// Percent of positions where the sequences agree. Throws on length
// mismatch or empty input.
double Accuracy(const std::vector<std::string>& gold,
                const std::vector<std::string>& predicted);

std::string PrfToJsonText(const Prf& prf);

}  // namespace evogrid

#endif  // EVOGRID_EVALUATION_HPP_
