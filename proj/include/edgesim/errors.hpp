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

#ifndef EDGESIM_ERRORS_HPP
#define EDGESIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace edgesim {

/// Invalid or inconsistent configuration. CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A mobility trace does not cover some (user, timestep).
class TraceError : public std::runtime_error {
 public:
  explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

/// Outcome streams for the privacy levels of one seed do not line up.
class PairingError : public std::runtime_error {
 public:
  explicit PairingError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read/written/parsed. Carries the path in the message.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edgesim

#endif  // EDGESIM_ERRORS_HPP
