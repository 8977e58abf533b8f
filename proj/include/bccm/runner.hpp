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
#include <ostream>
#include <string>
#include <vector>

#include "bccm/config.hpp"
#include "bccm/region_math.hpp"

namespace bccm {

/// CSV text (fixed header, 12 significant digits) for a list of rate points.
/// Columns: scheme, order, alpha, r1_bits, r2_bits, r1_stderr, r2_stderr,
/// b_iterations, b_residual, converged.
std::string csv_text(const std::vector<RatePair>& rows);

/// Low-SNR asymptote sweep over the scenario's power-split grid.
std::vector<RatePair> low_snr_sweep(const Scenario& sc);

/// Runs the classifier (verdict goes to `log`), then every requested scheme,
/// writing one CSV per scheme plus summary.txt under config.output_path.
/// Output bytes depend only on (config, seed). Returns 0.
int run(const RunConfig& config, std::ostream& log);

}  // namespace bccm
