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

#ifndef MVGROUND_ERROR_HPP_
#define MVGROUND_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvground {

enum class ErrorKind {
  kInvalidArgument,
  // scene_model
  kMissingAsset,
  kMalformedFile,
  kInvariantViolation,
  kLengthMismatch,
  kUnknownFrameId,
  kDimensionMismatch,
  kDegenerateVector,
  // geometry
  kInvalidDepth,
  kMissingPose,
  kMissingDepth,
  kDimMismatch,
  kEmptyPointSet,
  // tsdf
  kMemoryCapExceeded,
  kNoValidDepth,
  kEmptySurface,
  // view selection / oracle
  kMissingEmbedding,
  kOracleUnavailable,
  kProtocolViolation,
  kMissingScore,
  // proposals / grounding / eval
  kIndexOutOfRange,
  kNoProposals,
  kFallbackFailed,
  kEmptyGroundTruth,
  // cli
  kConfigInvalid,
  kIoError,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure surfaced by the library. `what()` is "<Kind>: <detail>", and
// stage annotations are prepended by WithStage().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }
  const std::string& stage() const { return stage_; }

  // Copy of this error tagged with a pipeline stage name.
  Error WithStage(std::string_view stage) const;

 private:
  Error(ErrorKind kind, std::string detail, std::string stage);

  ErrorKind kind_;
  std::string detail_;
  std::string stage_;
};

// Helpers for the common structured messages.
Error MissingAsset(std::string_view frame_id, std::string_view asset);
Error MalformedFile(std::string_view file, std::size_t byte_offset,
                    std::string_view reason);
Error InvariantViolation(std::string_view type, std::string_view rule);

}  // namespace mvground

#endif  // MVGROUND_ERROR_HPP_
