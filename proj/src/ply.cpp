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

#include "mvground/ply.hpp"

#include <cstring>
#include <sstream>
#include <string>

#include <Eigen/Geometry>

#include "mvground/error.hpp"
#include "mvground/scene_io.hpp"

namespace mvground {

double TriangleArea(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

void TriangleMesh::Validate() const {
  for (const auto& t : triangles) {
    for (std::uint32_t idx : t) {
      if (idx >= vertices.size()) {
        throw InvariantViolation("TriangleMesh", "indices < vertex count");
      }
    }
    if (TriangleArea(vertices[t[0]], vertices[t[1]], vertices[t[2]]) <=
        kDegenerateArea) {
      throw InvariantViolation("TriangleMesh", "no degenerate triangles");
    }
  }
}

namespace {

template <typename T>
void Put(std::string& out, T value) {
  out.append(reinterpret_cast<const char*>(&value), sizeof(T));
}

std::string Header(std::size_t vertices, std::size_t faces, bool with_faces) {
  std::ostringstream h;
  h << "ply\nformat binary_little_endian 1.0\n";
  h << "element vertex " << vertices << "\n";
  h << "property float x\nproperty float y\nproperty float z\n";
  if (with_faces) {
    h << "element face " << faces << "\n";
    h << "property list uchar int vertex_indices\n";
  }
  h << "end_header\n";
  return h.str();
}

std::size_t ScalarSize(const std::string& type) {
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
  if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
  if (type == "int" || type == "uint" || type == "float" || type == "int32" ||
      type == "uint32" || type == "float32") {
    return 4;
  }
  if (type == "double" || type == "float64") return 8;
  return 0;
}

}  // namespace

void WritePlyPoints(const std::filesystem::path& file,
                    const std::vector<Vec3>& points) {
  std::string out = Header(points.size(), 0, false);
  for (const Vec3& p : points) {
    Put(out, static_cast<float>(p.x()));
    Put(out, static_cast<float>(p.y()));
    Put(out, static_cast<float>(p.z()));
  }
  WriteFile(file, out);
}

void WritePlyMesh(const std::filesystem::path& file, const TriangleMesh& mesh) {
  std::string out = Header(mesh.vertices.size(), mesh.triangles.size(), true);
  for (const Vec3& p : mesh.vertices) {
    Put(out, static_cast<float>(p.x()));
    Put(out, static_cast<float>(p.y()));
    Put(out, static_cast<float>(p.z()));
  }
  for (const auto& t : mesh.triangles) {
    Put(out, std::uint8_t{3});
    for (std::uint32_t idx : t) Put(out, static_cast<std::int32_t>(idx));
  }
  WriteFile(file, out);
}

std::vector<Vec3> ReadPlyPoints(const std::filesystem::path& file) {
  const std::string data = ReadFile(file);
  const std::string name = file.string();
  const std::size_t header_end = data.find("end_header\n");
  if (data.rfind("ply\n", 0) != 0 || header_end == std::string::npos) {
    throw MalformedFile(name, 0, "not a PLY file");
  }
  std::istringstream header(data.substr(0, header_end));
  std::string line;
  bool binary = false, in_vertex = false, vertex_seen = false;
  std::size_t vertex_count = 0;
  struct Property {
    std::string type, name;
  };
  std::vector<Property> props;
  std::size_t line_offset = 0;
  while (std::getline(header, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "binary_little_endian") {
        binary = true;
      } else if (fmt != "ascii") {
        throw MalformedFile(name, line_offset, "unsupported format " + fmt);
      }
    } else if (word == "element") {
      std::string el;
      ls >> el;
      in_vertex = el == "vertex";
      if (in_vertex) {
        if (vertex_seen) throw MalformedFile(name, line_offset, "duplicate vertex element");
        ls >> vertex_count;
        vertex_seen = true;
      }
    } else if (word == "property" && in_vertex) {
      Property p;
      ls >> p.type;
      if (p.type == "list") throw MalformedFile(name, line_offset, "list vertex property");
      ls >> p.name;
      if (ScalarSize(p.type) == 0) {
        throw MalformedFile(name, line_offset, "unknown property type " + p.type);
      }
      props.push_back(p);
    }
    line_offset += line.size() + 1;
  }
  if (!vertex_seen) throw MalformedFile(name, 0, "no vertex element");
  int axis_of[3] = {-1, -1, -1};
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (props[i].name == "x") axis_of[0] = static_cast<int>(i);
    if (props[i].name == "y") axis_of[1] = static_cast<int>(i);
    if (props[i].name == "z") axis_of[2] = static_cast<int>(i);
  }
  if (axis_of[0] < 0 || axis_of[1] < 0 || axis_of[2] < 0) {
    throw MalformedFile(name, 0, "vertex element lacks x/y/z");
  }

  std::vector<Vec3> points(vertex_count);
  std::size_t offset = header_end + std::strlen("end_header\n");
  if (binary) {
    for (std::size_t v = 0; v < vertex_count; ++v) {
      for (std::size_t i = 0; i < props.size(); ++i) {
        const std::size_t sz = ScalarSize(props[i].type);
        if (offset + sz > data.size()) throw MalformedFile(name, offset, "truncated vertex data");
        const std::string& t = props[i].type;
        for (int a = 0; a < 3; ++a) {
          if (axis_of[a] != static_cast<int>(i)) continue;
          if (t == "float" || t == "float32") {
            float f;
            std::memcpy(&f, data.data() + offset, 4);
            points[v][a] = f;
          } else if (t == "double" || t == "float64") {
            std::memcpy(&points[v][a], data.data() + offset, 8);
          } else {
            throw MalformedFile(name, offset, "non-float coordinate");
          }
        }
        offset += sz;
      }
    }
  } else {
    std::istringstream body(data.substr(offset));
    for (std::size_t v = 0; v < vertex_count; ++v) {
      for (std::size_t i = 0; i < props.size(); ++i) {
        double value;
        if (!(body >> value)) {
          throw MalformedFile(name, offset + static_cast<std::size_t>(std::max<std::streamoff>(body.tellg(), 0)),
                              "truncated ASCII vertex data");
        }
        for (int a = 0; a < 3; ++a) {
          if (axis_of[a] == static_cast<int>(i)) points[v][a] = value;
        }
      }
    }
  }
  return points;
}

}  // namespace mvground
