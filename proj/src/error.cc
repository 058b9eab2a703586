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


#include "efgfom/error.h"

namespace efgfom {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kCyclicStructure: return "CyclicStructure";
    case ErrorKind::kDuplicateParentClaim: return "DuplicateParentClaim";
    case ErrorKind::kEmptyActionSet: return "EmptyActionSet";
    case ErrorKind::kInvalidParameter: return "InvalidParameter";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kOverflowGuard: return "OverflowGuard";
    case ErrorKind::kInvalidCoefficient: return "InvalidCoefficient";
    case ErrorKind::kNonPositiveScale: return "NonPositiveScale";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kStallError: return "StallError";
    case ErrorKind::kUnknownGame: return "UnknownGame";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace efgfom
