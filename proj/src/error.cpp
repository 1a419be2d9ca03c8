// Copyright 2026 The pesqkit Authors. All Rights Reserved.
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

#include "pesq/error.hpp"

namespace pesq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedHeader: return "malformed header";
    case ErrorCode::kUnsupportedCodec: return "unsupported codec";
    case ErrorCode::kEmptyData: return "empty data";
    case ErrorCode::kIoFailure: return "i/o failure";
    case ErrorCode::kUnsupportedRate: return "unsupported rate";
    case ErrorCode::kUnsupportedChannels: return "unsupported channels";
    case ErrorCode::kRateMismatch: return "rate mismatch";
    case ErrorCode::kChannelMismatch: return "channel mismatch";
    case ErrorCode::kTooShort: return "too short";
    case ErrorCode::kTooLong: return "too long";
    case ErrorCode::kSilentInput: return "silent input";
    case ErrorCode::kNoUtterances: return "no speech activity";
    case ErrorCode::kInvalidConfig: return "invalid configuration";
    case ErrorCode::kInvalidArgument: return "invalid argument";
  }
  return "unknown";
}

}  // namespace pesq
