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

#include "sockopt/manifest.hpp"

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <ctime>

#include <json.hpp>

#include "sockopt/errors.hpp"

namespace sockopt {

std::string now_utc() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  // Reproducible-build convention: a pinned epoch overrides the clock.
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0' && errno == 0 && v >= 0) {
      now = static_cast<std::time_t>(v);
    }
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  j["seed"] = manifest.seed;
  j["config"] = manifest.config_text;
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [path, digest] : manifest.inputs) inputs[path] = digest;
  j["inputs"] = std::move(inputs);
  nlohmann::json outputs = nlohmann::json::object();
  for (const auto& [name, digest] : manifest.outputs) outputs[name] = digest;
  j["outputs"] = std::move(outputs);
  j["created_utc"] = manifest.created_utc;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  RunManifest m;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    m.command = j.at("command").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_text = j.at("config").get<std::string>();
    for (const auto& [k, v] : j.at("inputs").items()) {
      m.inputs.emplace_back(k, v.get<std::string>());
    }
    for (const auto& [k, v] : j.at("outputs").items()) {
      m.outputs.emplace_back(k, v.get<std::string>());
    }
    m.created_utc = j.value("created_utc", "");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest JSON: ") + e.what());
  }
  return m;
}

}  // namespace sockopt
