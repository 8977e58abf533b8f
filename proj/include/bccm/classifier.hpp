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

#include <string>
#include <vector>

#include "bccm/channel_model.hpp"

namespace bccm {

enum class Verdict {
    NonTrivial,           ///< both users can attain positive secrecy rates
    DegradedUser1Silent,  ///< reduces to a wiretap channel, user 1 gets rate 0
    DegradedUser2Silent,  ///< reduces to a wiretap channel, user 2 gets rate 0
    Inconclusive,         ///< no rule fired; the known conditions are necessary only
};

enum class TriState { Yes, No, Unknown };

std::string_view to_string(Verdict v);
std::string_view to_string(TriState t);

/// Outcome of the degradedness screen, with the rules that fired.
struct Classification {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> reasons;
    TriState low_snr_indefinite = TriState::Unknown;
};

/// Decides from the channel statistics alone whether the two-user scenario
/// can be non-trivial. Rules, in order:
///   1. both zero-mean with scaled-identity covariances: degraded, the
///      smaller-variance user is silent;
///   2. both zero-mean with proportional covariances: degraded, silent user
///      determined by the scale factor;
///   3. single-antenna zero-mean pairs: always degraded;
///   4. single-antenna pairs with equal Rician K-factor: degraded, the
///      weaker-power user is silent;
///   5. otherwise the sign pattern of the eigenvalues of K_H1 - K_H2 decides:
///      indefinite means both users get positive rates at low SNR; a
///      (semi)definite difference is inconclusive at general SNR.
Classification classify(const ChannelStats& user1, const ChannelStats& user2);

}  // namespace bccm
