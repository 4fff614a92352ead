// Copyright 2026 The Edgesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDGESIM_COMMANDS_HPP_
#define EDGESIM_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "edgesim/config.hpp"

namespace edgesim {

inline constexpr const char* kToolVersion = "0.1.0";

// Relative artifact names inside the output directory.
std::string bs_csv_name(const SimConfig& config, std::uint64_t seed);
std::string mh_csv_name(const SimConfig& config, std::uint64_t seed);
std::string trace_csv_name(const SimConfig& config, std::uint64_t seed);
std::string outcomes_csv_name(std::uint64_t seed, double epsilon);

// Stages. Each writes its artifacts plus a manifest
// (manifest_<stage>.json) listing every file it produced. Existing outputs
// are refused unless overwrite is set; inputs from earlier stages are
// reused as-is. Progress and warning counters go to `log` (stderr in the
// CLI); data only to files.
void cmd_generate(const SimConfig& config, const std::string& out_dir,
                  bool overwrite, std::ostream& log);
void cmd_run(const SimConfig& config, const std::string& out_dir,
             bool overwrite, std::ostream& log);
void cmd_report(const SimConfig& config, const std::string& out_dir,
                bool overwrite, std::ostream& log);
void cmd_all(const SimConfig& config, const std::string& out_dir,
             bool overwrite, std::ostream& log);

}  // namespace edgesim

#endif  // EDGESIM_COMMANDS_HPP_
