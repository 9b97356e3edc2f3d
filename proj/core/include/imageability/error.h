//
// Copyright 2026 The Imageability Authors
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
//

#ifndef IMAGEABILITY_ERROR_H_
#define IMAGEABILITY_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace imageability {

enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kMalformedRecord,
  kMissingColumn,
  kBadMagic,
  kVersionMismatch,
  kTruncatedFile,
  kDimensionMismatch,
  kBackendUnavailable,
  kProtocolViolation,
  kDegenerateInput,
  kTooFewRows,
  kNoOverlap,
  kPreconditionFailed,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception. `location` carries a file
// path and, where known, a line number or byte offset.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string location = {})
      : std::runtime_error(message), code_(code), location_(std::move(location)) {}

  ErrorCode code() const { return code_; }
  const std::string& location() const { return location_; }

 private:
  ErrorCode code_;
  std::string location_;
};

}  // namespace imageability

#endif  // IMAGEABILITY_ERROR_H_
