// Copyright 2026 The sockopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Reproduction record emitted next to every output set: the resolved
// configuration, master seed, tool version, and content digests of inputs
// and outputs. Everything except created_utc is deterministic, so two runs
// of the same command agree on all other fields.

#ifndef SOCKOPT_MANIFEST_HPP_
#define SOCKOPT_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sockopt {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunManifest {
  std::string command;
  std::string config_text;  // resolved snapshot, parseable back
  std::uint64_t seed = 0;
  std::string version = kArtifactVersion;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, digest
  std::vector<std::pair<std::string, std::string>> outputs;  // name, digest
  std::string created_utc;  // set by now_utc(); excluded from identity
};

// Current UTC time, e.g. 2026-08-14T12:00:00Z. Honors SOURCE_DATE_EPOCH
// (seconds) so byte-identical reruns are possible when pinned.
std::string now_utc();

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

}  // namespace sockopt

#endif  // SOCKOPT_MANIFEST_HPP_
