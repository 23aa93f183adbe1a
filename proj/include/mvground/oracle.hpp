// Copyright 2026 The mvground Authors
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

#ifndef MVGROUND_ORACLE_HPP_
#define MVGROUND_ORACLE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mvground/mask.hpp"

namespace mvground {

// Request/response protocol spoken with external model backends. Records are
// single-line JSON objects:
//   request:  {id, kind, query_text, frame_ids, image_paths}
//   response: {id, kind, frames:[{frame_id, score}]}   select_views
//             {id, kind, mask:{width, height, runs}}   segment
//             {id, kind, score}                        relevance
//             {id, kind, error}                        backend failure
enum class OracleKind { kSelectViews, kSegment, kRelevance };

std::string_view OracleKindName(OracleKind kind);

struct OracleRequest {
  std::string id;
  OracleKind kind = OracleKind::kSelectViews;
  std::string query_text;
  std::vector<std::string> frame_ids;
  std::vector<std::string> image_paths;
};

struct ScoredFrame {
  std::string frame_id;
  std::optional<double> score;
};

struct OracleResponse {
  std::string id;
  OracleKind kind = OracleKind::kSelectViews;
  std::vector<ScoredFrame> frames;
  std::optional<Mask2D> mask;
  std::optional<double> score;
  std::optional<std::string> error;
};

// Request ids are derived from the query and frame so fixture transcripts
// can be matched deterministically.
std::string SelectViewsRequestId(const std::string& query_id);
std::string SegmentRequestId(const std::string& query_id, const std::string& frame_id);
std::string RelevanceRequestId(const std::string& query_id, const std::string& frame_id);

std::string RequestToJson(const OracleRequest& request);
OracleRequest ParseRequest(const std::string& line);
std::string ResponseToJson(const OracleResponse& response);
// Throws ProtocolViolation on malformed records.
OracleResponse ParseResponse(const std::string& line);

// Checks id and kind agreement, score ranges, frame ids within the request
// candidates, and presence of the kind's payload. Error responses map to
// OracleUnavailable.
void ValidateResponse(const OracleRequest& request, const OracleResponse& response);

class Oracle {
 public:
  virtual ~Oracle() = default;
  // Returns a validated response.
  OracleResponse Call(const OracleRequest& request);

 protected:
  virtual OracleResponse Exchange(const OracleRequest& request) = 0;
};

// Replays responses stored as JSON lines in every *.jsonl file of a
// directory, matched by request id.
class FixtureOracle : public Oracle {
 public:
  explicit FixtureOracle(const std::filesystem::path& dir);
  explicit FixtureOracle(std::vector<OracleResponse> responses);

  std::size_t size() const { return responses_.size(); }

 protected:
  OracleResponse Exchange(const OracleRequest& request) override;

 private:
  void Add(OracleResponse response, const std::string& origin);

  std::unordered_map<std::string, OracleResponse> responses_;
};

// Talks to a child process (`/bin/sh -c <command>`) over its stdin/stdout,
// one JSON line per record. Calls are serialized: one request in flight.
class ProcessOracle : public Oracle {
 public:
  explicit ProcessOracle(const std::string& command);
  ~ProcessOracle() override;
  ProcessOracle(const ProcessOracle&) = delete;
  ProcessOracle& operator=(const ProcessOracle&) = delete;

 protected:
  OracleResponse Exchange(const OracleRequest& request) override;

 private:
  std::string ReadLine();

  std::string command_;
  int fd_ = -1;
  int pid_ = -1;
  std::string buffer_;
  std::mutex mutex_;
};

// Identity oracle: select_views echoes the candidates in order with score 1,
// relevance answers 1, and segment requests are served from a table keyed by
// request id. Segment requests missing from the table are OracleUnavailable.
class EchoOracle : public Oracle {
 public:
  explicit EchoOracle(std::unordered_map<std::string, Mask2D> segment_masks = {});

 protected:
  OracleResponse Exchange(const OracleRequest& request) override;

 private:
  std::unordered_map<std::string, Mask2D> segment_masks_;
};

// "fixtures:<dir>" or "exec:<command>".
std::unique_ptr<Oracle> MakeOracle(const std::string& source);

}  // namespace mvground

#endif  // MVGROUND_ORACLE_HPP_
