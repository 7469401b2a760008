// Copyright 2026 The hopkit Authors.
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

#include "hopkit/run_config.h"

#include "hopkit/io.h"
#include "hopkit/text.h"
#include "hopkit/types.h"
#include "json.hpp"

#ifndef HOPKIT_VERSION
#define HOPKIT_VERSION "0.0.0"
#endif

namespace hopkit {

using ordered_json = nlohmann::ordered_json;

std::string_view Version() { return HOPKIT_VERSION; }

void RunConfig::AddInputFile(std::string role, const std::string& path) {
  inputs.push_back({std::move(role), path, HexDigest(Fnv1a64(ReadFile(path)))});
}

void RunConfig::AddBuiltin(std::string role, std::string_view name,
                           std::string_view contents) {
  inputs.push_back({std::move(role), "builtin:" + std::string(name),
                    HexDigest(Fnv1a64(contents))});
}

std::string RunConfig::Serialize() const {
  ordered_json out;
  out["tool"] = "hopkit";
  out["version"] = version;
  out["command"] = command;
  out["args"] = args;
  ordered_json in = ordered_json::array();
  for (const FileDigest& d : inputs) {
    in.push_back({{"role", d.role}, {"source", d.source}, {"fnv1a64", d.fnv1a64}});
  }
  out["inputs"] = std::move(in);
  out["outputs"] = outputs;
  out["seeds"] = seeds;
  out["settings"] = settings;
  return out.dump(2) + "\n";
}

RunConfig ParseRunConfig(std::string_view json_text) {
  RunConfig rc;
  try {
    const nlohmann::json doc = nlohmann::json::parse(json_text);
    rc.version = doc.at("version").get<std::string>();
    rc.command = doc.at("command").get<std::string>();
    rc.args = doc.at("args").get<std::vector<std::string>>();
    for (const auto& d : doc.at("inputs")) {
      rc.inputs.push_back({d.at("role").get<std::string>(),
                           d.at("source").get<std::string>(),
                           d.at("fnv1a64").get<std::string>()});
    }
    rc.outputs = doc.at("outputs").get<std::vector<std::string>>();
    rc.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    rc.settings = doc.at("settings").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed run config: ") + e.what());
  }
  return rc;
}

}  // namespace hopkit
