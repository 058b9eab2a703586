// Copyright 2026 The efgfom Authors
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


#ifndef EFGFOM_ERROR_H_
#define EFGFOM_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace efgfom {

enum class ErrorKind {
  kCyclicStructure,
  kDuplicateParentClaim,
  kEmptyActionSet,
  kInvalidParameter,
  kParseError,
  kSchemaVersionMismatch,
  kDomainError,
  kOverflowGuard,
  kInvalidCoefficient,
  kNonPositiveScale,
  kNumericalFailure,
  kStallError,
  kUnknownGame,
  kIoError,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this exception. The kind is
// stable and machine-checkable; the message carries the offending index or
// field.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace efgfom

#endif  // EFGFOM_ERROR_H_
