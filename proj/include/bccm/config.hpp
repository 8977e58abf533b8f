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

#include <filesystem>
#include <string_view>
#include <vector>

#include "bccm/channel_model.hpp"
#include "bccm/region_math.hpp"

namespace bccm {

/// A parsed run description: the scenario, which schemes to sweep and where
/// the CSV output goes.
struct RunConfig {
    Scenario scenario;
    std::vector<Scheme> schemes{Scheme::StatisticalCsit};
    std::filesystem::path output_path{"."};
    bool emit_raw = false;
};

/// Parses the flat key = value config format. Recognized keys:
///
///   user1.mean_re, user1.mean_im   real / imaginary parts of the mean (default 0)
///   user1.cov                      row-major covariance as re,im pairs (required)
///   user2.mean_re, user2.mean_im, user2.cov
///   p_t                            total power budget (required)
///   mc_samples                     default 100000
///   alpha_grid                     default 41
///   seed                           default 42
///   epsilon                        default 1e-3
///   max_iters                      default 200
///   schemes                        comma list, default statistical-csit
///
/// '#' starts a comment; numbers may be separated by spaces or commas.
/// Unknown or duplicate keys are errors. Throws ParseError with line context
/// or ValidationError when the scenario invariants fail.
RunConfig parse_config_text(std::string_view text, std::string_view origin = "<config>");

/// Reads and parses a config file.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace bccm
