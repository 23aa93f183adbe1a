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

#include "mvground/error.hpp"

namespace mvground {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kMissingAsset: return "MissingAsset";
    case ErrorKind::kMalformedFile: return "MalformedFile";
    case ErrorKind::kInvariantViolation: return "InvariantViolation";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kUnknownFrameId: return "UnknownFrameId";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kDegenerateVector: return "DegenerateVector";
    case ErrorKind::kInvalidDepth: return "InvalidDepth";
    case ErrorKind::kMissingPose: return "MissingPose";
    case ErrorKind::kMissingDepth: return "MissingDepth";
    case ErrorKind::kDimMismatch: return "DimMismatch";
    case ErrorKind::kEmptyPointSet: return "EmptyPointSet";
    case ErrorKind::kMemoryCapExceeded: return "MemoryCapExceeded";
    case ErrorKind::kNoValidDepth: return "NoValidDepth";
    case ErrorKind::kEmptySurface: return "EmptySurface";
    case ErrorKind::kMissingEmbedding: return "MissingEmbedding";
    case ErrorKind::kOracleUnavailable: return "OracleUnavailable";
    case ErrorKind::kProtocolViolation: return "ProtocolViolation";
    case ErrorKind::kMissingScore: return "MissingScore";
    case ErrorKind::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::kNoProposals: return "NoProposals";
    case ErrorKind::kFallbackFailed: return "FallbackFailed";
    case ErrorKind::kEmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorKind::kConfigInvalid: return "ConfigInvalid";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string Compose(ErrorKind kind, const std::string& detail,
                    const std::string& stage) {
  std::string out;
  if (!stage.empty()) out += "[" + stage + "] ";
  out += ErrorKindName(kind);
  out += ": ";
  out += detail;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& detail)
    : Error(kind, detail, std::string()) {}

Error::Error(ErrorKind kind, std::string detail, std::string stage)
    : std::runtime_error(Compose(kind, detail, stage)),
      kind_(kind),
      detail_(std::move(detail)),
      stage_(std::move(stage)) {}

Error Error::WithStage(std::string_view stage) const {
  std::string tagged(stage);
  if (!stage_.empty()) tagged += "/" + stage_;
  return Error(kind_, detail_, tagged);
}

Error MissingAsset(std::string_view frame_id, std::string_view asset) {
  return Error(ErrorKind::kMissingAsset,
               "frame '" + std::string(frame_id) + "' has no " +
                   std::string(asset));
}

Error MalformedFile(std::string_view file, std::size_t byte_offset,
                    std::string_view reason) {
  return Error(ErrorKind::kMalformedFile,
               std::string(file) + " at byte " + std::to_string(byte_offset) +
                   ": " + std::string(reason));
}

Error InvariantViolation(std::string_view type, std::string_view rule) {
  return Error(ErrorKind::kInvariantViolation,
               std::string(type) + " violates '" + std::string(rule) + "'");
}

}  // namespace mvground
