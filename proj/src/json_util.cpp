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

#include "json_util.hpp"

#include "mvground/scene_io.hpp"

namespace mvground::detail {

json ParseJson(std::string_view text, const std::string& file) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedFile(file, e.byte, e.what());
  }
}

json ParseJsonFile(const std::filesystem::path& file) {
  return ParseJson(ReadFile(file), file.string());
}

void SchemaError(const std::string& file, const std::string& what) {
  throw MalformedFile(file, 0, what);
}

void CheckKeys(const json& obj, std::initializer_list<std::string_view> allowed,
               const std::string& file) {
  if (!obj.is_object()) SchemaError(file, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || item.key() == a;
    if (!known) SchemaError(file, "unknown key '" + item.key() + "'");
  }
}

Box3 BoxFromJson(const json& value, const std::string& file) {
  if (!value.is_array() || value.size() != 6) {
    SchemaError(file, "box must be an array of 6 numbers");
  }
  std::vector<double> v;
  for (const json& x : value) {
    if (!x.is_number()) SchemaError(file, "box must be an array of 6 numbers");
    v.push_back(x.get<double>());
  }
  return Box3::FromArray(v);
}

json BoxToJson(const Box3& box) { return json(box.ToArray()); }

}  // namespace mvground::detail
