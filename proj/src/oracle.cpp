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

#include "mvground/oracle.hpp"

#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>
#include <unordered_set>

#include "json_util.hpp"
#include "mvground/error.hpp"
#include "mvground/scene_io.hpp"

namespace mvground {

using detail::json;

std::string_view OracleKindName(OracleKind kind) {
  switch (kind) {
    case OracleKind::kSelectViews: return "select_views";
    case OracleKind::kSegment: return "segment";
    case OracleKind::kRelevance: return "relevance";
  }
  return "select_views";
}

namespace {

Error Violation(const std::string& what) {
  return Error(ErrorKind::kProtocolViolation, what);
}

OracleKind ParseKind(const json& value) {
  if (!value.is_string()) throw Violation("kind must be a string");
  const auto s = value.get<std::string>();
  if (s == "select_views") return OracleKind::kSelectViews;
  if (s == "segment") return OracleKind::kSegment;
  if (s == "relevance") return OracleKind::kRelevance;
  throw Violation("unknown kind '" + s + "'");
}

json ParseLine(const std::string& line) {
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw Violation("record is not an object");
    return j;
  } catch (const json::parse_error& e) {
    throw Violation(std::string("unparseable record: ") + e.what());
  }
}

}  // namespace

std::string SelectViewsRequestId(const std::string& query_id) {
  return query_id + ":select_views";
}

std::string SegmentRequestId(const std::string& query_id, const std::string& frame_id) {
  return query_id + ":segment:" + frame_id;
}

std::string RelevanceRequestId(const std::string& query_id,
                               const std::string& frame_id) {
  return query_id + ":relevance:" + frame_id;
}

std::string RequestToJson(const OracleRequest& request) {
  json j;
  j["id"] = request.id;
  j["kind"] = OracleKindName(request.kind);
  j["query_text"] = request.query_text;
  j["frame_ids"] = request.frame_ids;
  j["image_paths"] = request.image_paths;
  return j.dump();
}

OracleRequest ParseRequest(const std::string& line) {
  const json j = ParseLine(line);
  OracleRequest r;
  try {
    r.id = j.at("id").get<std::string>();
    r.kind = ParseKind(j.at("kind"));
    r.query_text = j.value("query_text", std::string());
    r.frame_ids = j.value("frame_ids", std::vector<std::string>{});
    r.image_paths = j.value("image_paths", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw Violation(std::string("bad request: ") + e.what());
  }
  return r;
}

std::string ResponseToJson(const OracleResponse& response) {
  json j;
  j["id"] = response.id;
  j["kind"] = OracleKindName(response.kind);
  if (response.error) {
    j["error"] = *response.error;
    return j.dump();
  }
  switch (response.kind) {
    case OracleKind::kSelectViews: {
      json frames = json::array();
      for (const ScoredFrame& f : response.frames) {
        json rec{{"frame_id", f.frame_id}};
        if (f.score) rec["score"] = *f.score;
        frames.push_back(std::move(rec));
      }
      j["frames"] = std::move(frames);
      break;
    }
    case OracleKind::kSegment:
      if (response.mask) j["mask"] = json::parse(MaskToJson(*response.mask));
      break;
    case OracleKind::kRelevance:
      if (response.score) j["score"] = *response.score;
      break;
  }
  return j.dump();
}

OracleResponse ParseResponse(const std::string& line) {
  const json j = ParseLine(line);
  OracleResponse r;
  try {
    r.id = j.at("id").get<std::string>();
    r.kind = ParseKind(j.at("kind"));
    if (auto it = j.find("error"); it != j.end()) {
      r.error = it->get<std::string>();
      return r;
    }
    if (auto it = j.find("frames"); it != j.end()) {
      if (!it->is_array()) throw Violation("frames must be a list");
      for (const json& f : *it) {
        ScoredFrame sf;
        sf.frame_id = f.at("frame_id").get<std::string>();
        if (auto s = f.find("score"); s != f.end() && !s->is_null()) {
          if (!s->is_number()) throw Violation("score must be a number");
          sf.score = s->get<double>();
        }
        r.frames.push_back(std::move(sf));
      }
    }
    if (auto it = j.find("mask"); it != j.end()) {
      Mask2D m;
      m.width = it->at("width").get<int>();
      m.height = it->at("height").get<int>();
      m.runs = it->at("runs").get<std::vector<std::uint32_t>>();
      m.source = MaskSource::kOracleSegmenter;
      r.mask = std::move(m);
    }
    if (auto it = j.find("score"); it != j.end() && !it->is_null()) {
      if (!it->is_number()) throw Violation("score must be a number");
      r.score = it->get<double>();
    }
  } catch (const json::exception& e) {
    throw Violation(std::string("bad response: ") + e.what());
  }
  return r;
}

void ValidateResponse(const OracleRequest& request, const OracleResponse& response) {
  if (response.id != request.id) {
    throw Violation("response id '" + response.id + "' does not match request '" +
                    request.id + "'");
  }
  if (response.kind != request.kind) {
    throw Violation("response kind " + std::string(OracleKindName(response.kind)) +
                    " for request " + std::string(OracleKindName(request.kind)));
  }
  if (response.error) {
    throw Error(ErrorKind::kOracleUnavailable,
                "backend error for '" + request.id + "': " + *response.error);
  }
  auto check_score = [&](double s) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Violation("score " + std::to_string(s) + " outside [0, 1] in '" +
                      request.id + "'");
    }
  };
  switch (request.kind) {
    case OracleKind::kSelectViews: {
      const std::unordered_set<std::string> allowed(request.frame_ids.begin(),
                                                    request.frame_ids.end());
      std::unordered_set<std::string> seen;
      for (const ScoredFrame& f : response.frames) {
        if (!allowed.count(f.frame_id)) {
          throw Violation("frame '" + f.frame_id + "' was not a candidate in '" +
                          request.id + "'");
        }
        if (!seen.insert(f.frame_id).second) {
          throw Violation("frame '" + f.frame_id + "' repeated in '" + request.id + "'");
        }
        if (f.score) check_score(*f.score);
      }
      break;
    }
    case OracleKind::kSegment:
      if (!response.mask) throw Violation("segment response without mask");
      try {
        response.mask->Validate();
      } catch (const Error& e) {
        throw Violation("invalid mask in '" + request.id + "': " + e.detail());
      }
      break;
    case OracleKind::kRelevance:
      if (!response.score) throw Violation("relevance response without score");
      check_score(*response.score);
      break;
  }
}

OracleResponse Oracle::Call(const OracleRequest& request) {
  OracleResponse response = Exchange(request);
  ValidateResponse(request, response);
  return response;
}

// ---------------------------------------------------------------------------

FixtureOracle::FixtureOracle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::kOracleUnavailable,
                "fixture directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    const std::string text = ReadFile(file);
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      const std::string line = text.substr(start, end - start);
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        Add(ParseResponse(line), file.string());
      }
      start = end + 1;
    }
  }
}

FixtureOracle::FixtureOracle(std::vector<OracleResponse> responses) {
  for (auto& r : responses) Add(std::move(r), "<memory>");
}

void FixtureOracle::Add(OracleResponse response, const std::string& origin) {
  const std::string id = response.id;
  if (!responses_.emplace(id, std::move(response)).second) {
    throw Violation("duplicate fixture response '" + id + "' in " + origin);
  }
}

OracleResponse FixtureOracle::Exchange(const OracleRequest& request) {
  auto it = responses_.find(request.id);
  if (it == responses_.end()) {
    throw Violation("no fixture response for request '" + request.id + "'");
  }
  return it->second;
}

// ---------------------------------------------------------------------------

ProcessOracle::ProcessOracle(const std::string& command) : command_(command) {
  int fds[2];
  if (socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
    throw Error(ErrorKind::kOracleUnavailable,
                std::string("socketpair failed: ") + std::strerror(errno));
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw Error(ErrorKind::kOracleUnavailable,
                std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    close(fds[0]);
    dup2(fds[1], STDIN_FILENO);
    dup2(fds[1], STDOUT_FILENO);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  fd_ = fds[0];
  pid_ = pid;
}

ProcessOracle::~ProcessOracle() {
  if (fd_ >= 0) {
    shutdown(fd_, SHUT_RDWR);
    close(fd_);
  }
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

std::string ProcessOracle::ReadLine() {
  for (;;) {
    const std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    const ssize_t n = recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      throw Error(ErrorKind::kOracleUnavailable,
                  "oracle process '" + command_ + "' closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

OracleResponse ProcessOracle::Exchange(const OracleRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  const std::string line = RequestToJson(request) + "\n";
  std::size_t sent = 0;
  while (sent < line.size()) {
    const ssize_t n = send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      throw Error(ErrorKind::kOracleUnavailable,
                  "cannot write to oracle process '" + command_ + "'");
    }
    sent += static_cast<std::size_t>(n);
  }
  return ParseResponse(ReadLine());
}

// ---------------------------------------------------------------------------

EchoOracle::EchoOracle(std::unordered_map<std::string, Mask2D> segment_masks)
    : segment_masks_(std::move(segment_masks)) {}

OracleResponse EchoOracle::Exchange(const OracleRequest& request) {
  OracleResponse r;
  r.id = request.id;
  r.kind = request.kind;
  switch (request.kind) {
    case OracleKind::kSelectViews:
      for (const std::string& id : request.frame_ids) r.frames.push_back({id, 1.0});
      break;
    case OracleKind::kRelevance:
      r.score = 1.0;
      break;
    case OracleKind::kSegment: {
      auto it = segment_masks_.find(request.id);
      if (it == segment_masks_.end()) {
        throw Error(ErrorKind::kOracleUnavailable,
                    "echo oracle has no mask for '" + request.id + "'");
      }
      r.mask = it->second;
      break;
    }
  }
  return r;
}

std::unique_ptr<Oracle> MakeOracle(const std::string& source) {
  if (source.rfind("fixtures:", 0) == 0) {
    return std::make_unique<FixtureOracle>(source.substr(9));
  }
  if (source.rfind("exec:", 0) == 0) {
    return std::make_unique<ProcessOracle>(source.substr(5));
  }
  throw Error(ErrorKind::kConfigInvalid,
              "oracle must be 'fixtures:<dir>' or 'exec:<command>', got '" + source + "'");
}

}  // namespace mvground
