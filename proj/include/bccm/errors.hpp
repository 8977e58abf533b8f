// SPDX-License-Identifier: Apache-2.0
//
// bccm: secrecy rate regions for fading MISO broadcast channels
// with confidential messages under statistical CSIT
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace bccm {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input / validation errors (CLI exit code 1).
struct NonHermitianError : Error { using Error::Error; };
struct NotPsdError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct BadCountError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// Numerical failures (CLI exit code 2).
struct EvaluationError : Error { using Error::Error; };
struct SingularDenominatorError : Error { using Error::Error; };
struct SingularExpectationError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };

/// Maps an error to the CLI exit code: 1 for validation problems,
/// 2 for numerical failures (and anything unexpected).
int exit_code_for(const std::exception& e);

}  // namespace bccm
