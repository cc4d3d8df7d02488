// Copyright 2026 The AQS Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AQS_TRANSCRIPT_H_
#define AQS_TRANSCRIPT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aqs/qstate.h"
#include "json.hpp"

namespace aqs {

using Json = nlohmann::ordered_json;

enum class Party { kAlice, kBob, kTrent, kEve };

std::string_view PartyName(Party party);

// Position of a step label ("I2", "S5", "V4'", ...) in protocol order.
// Primed and unprimed labels share a rank. Throws on malformed labels.
int StepRank(std::string_view step);

struct Event {
  size_t idx = 0;
  Party actor = Party::kAlice;
  std::string step;
  std::string action;
  std::vector<Party> visibility;
  Json classical = Json::object();
  std::vector<QubitId> quantum;
  // Amplitudes of `quantum`, only populated in debug runs.
  Json debug;

  bool VisibleTo(Party p) const;
};

struct BoardEntry {
  size_t seq = 0;
  Party author = Party::kAlice;
  std::string tag;
  Json payload;
};

// Append-only classical broadcast. Authors are authenticated; contents are
// not checked against anything.
class PublicBoard {
 public:
  const BoardEntry& Append(Party author, std::string tag, Json payload);
  std::span<const BoardEntry> entries() const { return entries_; }
  const BoardEntry* Find(std::string_view tag) const;

 private:
  std::vector<BoardEntry> entries_;
};

// Ordered log of everything that happened in one run. Every send, receive,
// measurement, comparison and board post is one event.
class Transcript {
 public:
  Transcript(int scheme, int n, uint64_t seed)
      : scheme_(scheme), n_(n), seed_(seed) {}

  Event& Log(Party actor, std::string step, std::string action,
             std::vector<Party> visibility, Json classical = Json::object(),
             std::vector<QubitId> quantum = {});
  // Appends to the board and logs the post as an event visible to everyone.
  const BoardEntry& Post(Party author, std::string step, std::string tag,
                         Json payload);

  int scheme() const { return scheme_; }
  int n() const { return n_; }
  uint64_t seed() const { return seed_; }
  std::span<const Event> events() const { return events_; }
  const PublicBoard& board() const { return board_; }

  // {scheme, n, seed, events, board}; `debug` adds quantum amplitudes.
  Json ToJson(bool debug = false) const;

 private:
  int scheme_;
  int n_;
  uint64_t seed_;
  std::vector<Event> events_;
  PublicBoard board_;
};

// Canonical serialization of what the arbitrator can observe: the events
// tagged visible to Trent (renumbered in order) and the whole public board.
// Contains no seed and no quantum data.
std::string TrentView(const Transcript& transcript);

}  // namespace aqs

#endif  // AQS_TRANSCRIPT_H_
