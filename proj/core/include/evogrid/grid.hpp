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

#ifndef EVOGRID_GRID_HPP_
#define EVOGRID_GRID_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evogrid/schema.hpp"

namespace evogrid {

// Messages indexed by (time unit, source). Immutable after Build.
class Grid {
 public:
  struct BuildOptions {
    // Declared source order (first-seen in the corpus manifest); sources
    // found only in messages are appended in first-seen order.
    std::vector<std::string> source_order;
    bool include_partial = false;
  };

  static Grid Build(const std::vector<Message>& messages,
                    const BuildOptions& options = {});

  // source -> messages at time t.
  std::map<std::string, std::vector<Message>> HorizontalSlice(int t) const;
  // time -> messages from `source`. Throws LookupError on unknown source.
  std::map<int, std::vector<Message>> VerticalSlice(
      const std::string& source) const;

  const std::vector<std::string>& Sources() const { return sources_; }
  int SourceIndex(const std::string& source) const;
  std::optional<std::pair<int, int>> TimeRange() const { return time_range_; }

  const std::vector<Message>& Cell(int t, const std::string& source) const;
  std::vector<Message> AllMessages() const;
  std::size_t MessageCount() const { return count_; }

  std::string ToJsonText() const;

 private:
  // (time, source index) -> messages, stable by provenance.
  std::map<std::pair<int, int>, std::vector<Message>> cells_;
  std::vector<std::string> sources_;
  std::optional<std::pair<int, int>> time_range_;
  std::size_t count_ = 0;
};

}  // namespace evogrid

#endif  // EVOGRID_GRID_HPP_
