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

#include "evogrid/grid.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "evogrid/errors.hpp"

namespace evogrid {

using nlohmann::json;

Grid Grid::Build(const std::vector<Message>& messages,
                 const BuildOptions& options) {
  Grid grid;
  grid.sources_ = options.source_order;
  auto source_index = [&grid](const std::string& source) {
    for (std::size_t i = 0; i < grid.sources_.size(); ++i) {
      if (grid.sources_[i] == source) return static_cast<int>(i);
    }
    grid.sources_.push_back(source);
    return static_cast<int>(grid.sources_.size() - 1);
  };

  std::set<std::string> seen;
  for (const auto& msg : messages) {
    if (msg.IsPartial() && !options.include_partial) continue;
    if (!seen.insert(msg.IdentityKey()).second) {
      throw ValidationError("grid: duplicate message identity '" +
                            msg.IdentityKey() + "'");
    }
    const int s = source_index(msg.source);
    grid.cells_[{msg.time, s}].push_back(msg);
    ++grid.count_;
    if (!grid.time_range_) {
      grid.time_range_ = {msg.time, msg.time};
    } else {
      grid.time_range_->first = std::min(grid.time_range_->first, msg.time);
      grid.time_range_->second = std::max(grid.time_range_->second, msg.time);
    }
  }
  for (auto& [_, cell] : grid.cells_) {
    std::stable_sort(cell.begin(), cell.end(),
                     [](const Message& a, const Message& b) {
                       if (a.provenance != b.provenance) {
                         return a.provenance < b.provenance;
                       }
                       return a.ContentKey() < b.ContentKey();
                     });
  }
  return grid;
}

int Grid::SourceIndex(const std::string& source) const {
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (sources_[i] == source) return static_cast<int>(i);
  }
  throw LookupError("grid: unknown source '" + source + "'");
}

std::map<std::string, std::vector<Message>> Grid::HorizontalSlice(
    int t) const {
  std::map<std::string, std::vector<Message>> out;
  for (const auto& [key, cell] : cells_) {
    if (key.first == t) out[sources_[key.second]] = cell;
  }
  return out;
}

std::map<int, std::vector<Message>> Grid::VerticalSlice(
    const std::string& source) const {
  const int s = SourceIndex(source);
  std::map<int, std::vector<Message>> out;
  for (const auto& [key, cell] : cells_) {
    if (key.second == s) out[key.first] = cell;
  }
  return out;
}

static const std::vector<Message> kEmptyCell;

const std::vector<Message>& Grid::Cell(int t, const std::string& source) const {
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (sources_[i] == source) {
      auto it = cells_.find({t, static_cast<int>(i)});
      return it == cells_.end() ? kEmptyCell : it->second;
    }
  }
  return kEmptyCell;
}

std::vector<Message> Grid::AllMessages() const {
  std::vector<Message> out;
  out.reserve(count_);
  for (const auto& [_, cell] : cells_) {
    out.insert(out.end(), cell.begin(), cell.end());
  }
  return out;
}

std::string Grid::ToJsonText() const {
  json doc;
  doc["sources"] = sources_;
  if (time_range_) {
    doc["time_range"] = {time_range_->first, time_range_->second};
  } else {
    doc["time_range"] = json::array();
  }
  json cells = json::array();
  for (const auto& [key, cell] : cells_) {
    json entry;
    entry["time"] = key.first;
    entry["source"] = sources_[key.second];
    json msgs = json::array();
    for (const auto& m : cell) {
      json jm;
      jm["type"] = m.type;
      json slots;
      for (const auto& [slot, v] : m.values) slots[slot] = v.ToString();
      jm["slots"] = slots.is_null() ? json::object() : slots;
      jm["doc"] = m.provenance.doc_id;
      jm["sentences"] = m.provenance.sentences;
      msgs.push_back(jm);
    }
    entry["messages"] = msgs;
    cells.push_back(entry);
  }
  doc["cells"] = cells;
  return doc.dump(2);
}

}  // namespace evogrid
