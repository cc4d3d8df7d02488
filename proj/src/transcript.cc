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

#include "aqs/transcript.h"

#include <algorithm>
#include <charconv>

#include "aqs/error.h"

namespace aqs {

std::string_view PartyName(Party party) {
  switch (party) {
    case Party::kAlice:
      return "Alice";
    case Party::kBob:
      return "Bob";
    case Party::kTrent:
      return "Trent";
    case Party::kEve:
      return "Eve";
  }
  return "?";
}

int StepRank(std::string_view step) {
  std::string_view s = step;
  if (!s.empty() && s.back() == '\'') s.remove_suffix(1);
  if (s.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad step label '" + std::string(step) + "'");
  }
  int phase;
  switch (s.front()) {
    case 'I':
      phase = 0;
      break;
    case 'S':
      phase = 1;
      break;
    case 'V':
      phase = 2;
      break;
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  "bad step label '" + std::string(step) + "'");
  }
  int number = 0;
  auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), number);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad step label '" + std::string(step) + "'");
  }
  return phase * 100 + number;
}

bool Event::VisibleTo(Party p) const {
  return std::find(visibility.begin(), visibility.end(), p) != visibility.end();
}

const BoardEntry& PublicBoard::Append(Party author, std::string tag,
                                      Json payload) {
  entries_.push_back(BoardEntry{entries_.size() + 1, author, std::move(tag),
                                std::move(payload)});
  return entries_.back();
}

const BoardEntry* PublicBoard::Find(std::string_view tag) const {
  for (const BoardEntry& e : entries_) {
    if (e.tag == tag) return &e;
  }
  return nullptr;
}

Event& Transcript::Log(Party actor, std::string step, std::string action,
                       std::vector<Party> visibility, Json classical,
                       std::vector<QubitId> quantum) {
  StepRank(step);
  Event e;
  e.idx = events_.size();
  e.actor = actor;
  e.step = std::move(step);
  e.action = std::move(action);
  e.visibility = std::move(visibility);
  e.classical = std::move(classical);
  e.quantum = std::move(quantum);
  events_.push_back(std::move(e));
  return events_.back();
}

const BoardEntry& Transcript::Post(Party author, std::string step,
                                   std::string tag, Json payload) {
  const BoardEntry& entry = board_.Append(author, tag, payload);
  Log(author, std::move(step), "post",
      {Party::kAlice, Party::kBob, Party::kTrent, Party::kEve},
      Json{{"board_seq", entry.seq}, {"tag", tag}, {"payload", payload}});
  return entry;
}

namespace {

Json BoardJson(const PublicBoard& board) {
  Json out = Json::array();
  for (const BoardEntry& e : board.entries()) {
    out.push_back(Json{{"seq", e.seq},
                       {"author", PartyName(e.author)},
                       {"tag", e.tag},
                       {"payload", e.payload}});
  }
  return out;
}

}  // namespace

Json Transcript::ToJson(bool debug) const {
  Json events = Json::array();
  for (const Event& e : events_) {
    Json vis = Json::array();
    for (Party p : e.visibility) vis.push_back(PartyName(p));
    Json j{{"idx", e.idx},
           {"actor", PartyName(e.actor)},
           {"tag", e.step + "." + e.action},
           {"visibility", vis},
           {"classical", e.classical}};
    if (debug) {
      Json refs = Json::array();
      for (QubitId q : e.quantum) refs.push_back(q.value);
      j["quantum"] = refs;
      j["amplitudes"] = e.debug;
    }
    events.push_back(std::move(j));
  }
  return Json{{"scheme", scheme_},
              {"n", n_},
              {"seed", seed_},
              {"events", std::move(events)},
              {"board", BoardJson(board_)}};
}

std::string TrentView(const Transcript& transcript) {
  Json events = Json::array();
  size_t ord = 0;
  for (const Event& e : transcript.events()) {
    if (!e.VisibleTo(Party::kTrent)) continue;
    events.push_back(Json{{"ord", ord++},
                          {"actor", PartyName(e.actor)},
                          {"tag", e.step + "." + e.action},
                          {"classical", e.classical}});
  }
  const Json view{{"scheme", transcript.scheme()},
                  {"n", transcript.n()},
                  {"events", std::move(events)},
                  {"board", BoardJson(transcript.board())}};
  return view.dump();
}

}  // namespace aqs
