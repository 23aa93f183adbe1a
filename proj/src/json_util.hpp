// Copyright 2026 The mvground Authors
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

#ifndef MVGROUND_SRC_JSON_UTIL_HPP_
#define MVGROUND_SRC_JSON_UTIL_HPP_

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mvground/error.hpp"
#include "mvground/scene.hpp"

namespace mvground::detail {

using json = nlohmann::json;

// Parses text, mapping syntax errors to MalformedFile with the byte offset.
json ParseJson(std::string_view text, const std::string& file);
json ParseJsonFile(const std::filesystem::path& file);

// Schema errors carry no reliable offset; they report byte 0 plus the key.
[[noreturn]] void SchemaError(const std::string& file, const std::string& what);

template <typename T>
T Get(const json& obj, const char* key, const std::string& file) {
  auto it = obj.find(key);
  if (it == obj.end()) SchemaError(file, std::string("missing key '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    SchemaError(file, std::string("key '") + key + "': " + e.what());
  }
}

// Rejects keys outside `allowed`.
void CheckKeys(const json& obj, std::initializer_list<std::string_view> allowed,
               const std::string& file);

Box3 BoxFromJson(const json& value, const std::string& file);
json BoxToJson(const Box3& box);

}  // namespace mvground::detail

#endif  // MVGROUND_SRC_JSON_UTIL_HPP_
