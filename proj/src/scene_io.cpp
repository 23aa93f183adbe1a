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

#include "mvground/scene_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "json_util.hpp"
#include "mvground/error.hpp"
#include "mvground/ply.hpp"

namespace mvground {

using detail::Get;
using detail::json;

std::string ReadFile(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIoError, "cannot open " + file.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path& file, std::string_view bytes) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + file.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIoError, "short write to " + file.string());
}

std::string_view SceneModeName(SceneMode mode) {
  switch (mode) {
    case SceneMode::kFull: return "full";
    case SceneMode::kPosedOnly: return "posed_only";
    case SceneMode::kImagesOnly: return "images_only";
  }
  return "full";
}

SceneMode ParseSceneMode(std::string_view name) {
  if (name == "full") return SceneMode::kFull;
  if (name == "posed_only") return SceneMode::kPosedOnly;
  if (name == "images_only") return SceneMode::kImagesOnly;
  throw Error(ErrorKind::kConfigInvalid,
              "unknown mode '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Poses

Pose ReadPose(const fs::path& file) {
  const std::string text = ReadFile(file);
  std::vector<double> values;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[end]))) {
      ++end;
    }
    const std::string token = text.substr(i, end - i);
    char* stop = nullptr;
    const double v = std::strtod(token.c_str(), &stop);
    if (stop != token.c_str() + token.size()) {
      throw MalformedFile(file.string(), i, "not a number: '" + token + "'");
    }
    if (values.size() == 16) {
      throw MalformedFile(file.string(), i, "more than 16 values");
    }
    values.push_back(v);
    i = end;
  }
  if (values.size() != 16) {
    throw MalformedFile(file.string(), text.size(),
                        "expected 16 values, found " +
                            std::to_string(values.size()));
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = values[static_cast<std::size_t>(r * 4 + c)];
  }
  return Pose::FromMatrix4(m);
}

void WritePose(const fs::path& file, const Pose& pose) {
  const Eigen::Matrix4d m = pose.Matrix4();
  std::ostringstream out;
  out << std::setprecision(17);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out << (c ? " " : "") << m(r, c);
    out << "\n";
  }
  WriteFile(file, out.str());
}

// ---------------------------------------------------------------------------
// Depth PNG

namespace {

struct PngReadBuffer {
  const std::string* data;
  std::size_t offset;
};

void PngReadFromBuffer(png_structp png, png_bytep out, png_size_t length) {
  auto* buf = static_cast<PngReadBuffer*>(png_get_io_ptr(png));
  if (buf->offset + length > buf->data->size()) {
    png_error(png, "unexpected end of data");
  }
  std::memcpy(out, buf->data->data() + buf->offset, length);
  buf->offset += length;
}

void PngWriteToString(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void PngFlushNoop(png_structp) {}

}  // namespace

DepthMap ReadDepthPng(const fs::path& file) {
  const std::string data = ReadFile(file);
  if (data.size() < 8 ||
      png_sig_cmp(reinterpret_cast<png_const_bytep>(data.data()), 0, 8) != 0) {
    throw MalformedFile(file.string(), 0, "missing PNG signature");
  }
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::kIoError, "libpng initialization failed");
  }
  PngReadBuffer buffer{&data, 0};
  DepthMap depth;
  std::vector<std::uint16_t> raw;
  std::vector<png_bytep> rows;
  const char* failure = nullptr;
  if (setjmp(png_jmpbuf(png))) {
    const std::size_t offset = buffer.offset;
    png_destroy_read_struct(&png, &info, nullptr);
    throw MalformedFile(file.string(), offset,
                        failure ? failure : "corrupt PNG stream");
  }
  png_set_read_fn(png, &buffer, PngReadFromBuffer);
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  if (png_get_bit_depth(png, info) != 16 ||
      png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY) {
    failure = "depth PNG must be 16-bit grayscale";
    png_error(png, failure);
  }
  png_set_swap(png);  // network byte order -> host little-endian
  png_read_update_info(png, info);
  raw.resize(static_cast<std::size_t>(width) * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(raw.data() + std::size_t(y) * width);
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  depth.width = static_cast<int>(width);
  depth.height = static_cast<int>(height);
  depth.values.resize(raw.size());
  std::transform(raw.begin(), raw.end(), depth.values.begin(),
                 [](std::uint16_t mm) { return static_cast<float>(mm) / 1000.0f; });
  return depth;
}

void WriteDepthPng(const fs::path& file, const DepthMap& depth) {
  depth.Validate();
  std::vector<std::uint16_t> raw(depth.values.size());
  std::transform(depth.values.begin(), depth.values.end(), raw.begin(),
                 [](float m) {
                   const double mm = std::round(double(m) * 1000.0);
                   return static_cast<std::uint16_t>(std::clamp(mm, 0.0, 65535.0));
                 });
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::kIoError, "libpng initialization failed");
  }
  std::string encoded;
  std::vector<png_bytep> rows(static_cast<std::size_t>(depth.height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::kIoError, "PNG encoding failed for " + file.string());
  }
  png_set_write_fn(png, &encoded, PngWriteToString, PngFlushNoop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(depth.width),
               static_cast<png_uint_32>(depth.height), 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_set_swap(png);
  for (int y = 0; y < depth.height; ++y) {
    rows[static_cast<std::size_t>(y)] =
        reinterpret_cast<png_bytep>(raw.data() + std::size_t(y) * depth.width);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  WriteFile(file, encoded);
}

// ---------------------------------------------------------------------------
// Masks

namespace {

Mask2D MaskFromJson(const json& j, const std::string& file) {
  detail::CheckKeys(j, {"width", "height", "runs"}, file);
  Mask2D mask;
  mask.width = Get<int>(j, "width", file);
  mask.height = Get<int>(j, "height", file);
  mask.runs = Get<std::vector<std::uint32_t>>(j, "runs", file);
  if (mask.width < 1 || mask.height < 1) {
    detail::SchemaError(file, "mask dims must be positive");
  }
  mask.Validate();
  return mask;
}

}  // namespace

Mask2D ReadMask(const fs::path& file, const std::string& frame_id) {
  Mask2D mask = MaskFromJson(detail::ParseJsonFile(file), file.string());
  mask.frame_id = frame_id;
  mask.instance = file.stem().string();
  mask.source = MaskSource::kFixture;
  return mask;
}

std::string MaskToJson(const Mask2D& mask) {
  json j;
  j["width"] = mask.width;
  j["height"] = mask.height;
  j["runs"] = CanonicalRuns(mask.runs);
  return j.dump();
}

void WriteMask(const fs::path& file, const Mask2D& mask) {
  mask.Validate();
  WriteFile(file, MaskToJson(mask) + "\n");
}

std::vector<Mask2D> LoadSceneMasks(const fs::path& dir, const Scene& scene) {
  std::vector<Mask2D> masks;
  for (const Frame& frame : scene.frames) {
    const fs::path frame_dir = dir / "masks" / frame.id;
    if (!fs::is_directory(frame_dir)) continue;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(frame_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
      Mask2D m = ReadMask(f, frame.id);
      if (m.width != frame.intrinsics.width ||
          m.height != frame.intrinsics.height) {
        throw Error(ErrorKind::kDimMismatch,
                    f.string() + " does not match frame '" + frame.id + "'");
      }
      masks.push_back(std::move(m));
    }
  }
  return masks;
}

// ---------------------------------------------------------------------------
// Manifest

namespace {

Intrinsics IntrinsicsFromJson(const json& j, const std::string& file) {
  detail::CheckKeys(j, {"fx", "fy", "cx", "cy", "width", "height"}, file);
  Intrinsics k;
  k.fx = Get<double>(j, "fx", file);
  k.fy = Get<double>(j, "fy", file);
  k.cx = Get<double>(j, "cx", file);
  k.cy = Get<double>(j, "cy", file);
  k.width = Get<int>(j, "width", file);
  k.height = Get<int>(j, "height", file);
  return k;
}

json IntrinsicsToJson(const Intrinsics& k) {
  return json{{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx},
              {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
}

// Resolves an optional asset path: absent key -> layout default, null -> none.
std::optional<fs::path> AssetPath(const json& record, const char* key,
                                  const fs::path& fallback,
                                  const std::string& file) {
  auto it = record.find(key);
  if (it == record.end()) return fallback;
  if (it->is_null()) return std::nullopt;
  if (!it->is_string()) detail::SchemaError(file, std::string(key) + " must be a path");
  return fs::path(it->get<std::string>());
}

}  // namespace

Scene LoadScene(const fs::path& dir, SceneMode mode) {
  const fs::path manifest_path = dir / kManifestName;
  if (!fs::exists(manifest_path)) {
    throw Error(ErrorKind::kMissingAsset, "no manifest at " + manifest_path.string());
  }
  const std::string manifest_file = manifest_path.string();
  const json manifest = detail::ParseJsonFile(manifest_path);
  detail::CheckKeys(manifest,
                    {"id", "embedding_dim", "frames", "point_cloud", "source"},
                    manifest_file);

  Scene scene;
  scene.id = Get<std::string>(manifest, "id", manifest_file);
  scene.embedding_dim = Get<int>(manifest, "embedding_dim", manifest_file);
  if (scene.embedding_dim < 1) {
    throw InvariantViolation("Scene", "embedding_dim >= 1");
  }
  const json frames = Get<json>(manifest, "frames", manifest_file);
  if (!frames.is_array()) detail::SchemaError(manifest_file, "frames must be a list");

  for (const json& record : frames) {
    detail::CheckKeys(record, {"id", "intrinsics", "pose", "depth", "image"},
                      manifest_file);
    Frame frame;
    frame.id = Get<std::string>(record, "id", manifest_file);
    frame.intrinsics =
        IntrinsicsFromJson(Get<json>(record, "intrinsics", manifest_file),
                           manifest_file);
    frame.intrinsics.Validate();

    const auto pose_rel = AssetPath(record, "pose",
                                    fs::path("poses") / (frame.id + ".txt"),
                                    manifest_file);
    const auto depth_rel = AssetPath(record, "depth",
                                     fs::path("depth") / (frame.id + ".png"),
                                     manifest_file);
    if (pose_rel && fs::exists(dir / *pose_rel)) {
      frame.pose = ReadPose(dir / *pose_rel);
    } else if (mode != SceneMode::kImagesOnly) {
      throw MissingAsset(frame.id, "pose");
    }
    if (depth_rel && fs::exists(dir / *depth_rel)) {
      frame.depth = ReadDepthPng(dir / *depth_rel);
    } else if (mode == SceneMode::kFull) {
      throw MissingAsset(frame.id, "depth");
    }
    if (auto it = record.find("image"); it != record.end() && !it->is_null()) {
      frame.image_path = (dir / it->get<std::string>()).lexically_normal().string();
    }
    frame.Validate();
    scene.frames.push_back(std::move(frame));
  }

  if (auto it = manifest.find("point_cloud"); it != manifest.end() && !it->is_null()) {
    const fs::path cloud = dir / it->get<std::string>();
    if (!fs::exists(cloud)) throw MissingAsset(scene.id, "point_cloud");
    scene.point_cloud = ReadPlyPoints(cloud);
  }
  scene.Validate();
  return scene;
}

void SaveScene(const Scene& scene, const fs::path& dir) {
  fs::create_directories(dir);
  json frames = json::array();
  for (const Frame& frame : scene.frames) {
    json record;
    record["id"] = frame.id;
    record["intrinsics"] = IntrinsicsToJson(frame.intrinsics);
    if (frame.pose) {
      const fs::path rel = fs::path("poses") / (frame.id + ".txt");
      WritePose(dir / rel, *frame.pose);
      record["pose"] = rel.generic_string();
    } else {
      record["pose"] = nullptr;
    }
    if (frame.depth) {
      const fs::path rel = fs::path("depth") / (frame.id + ".png");
      WriteDepthPng(dir / rel, *frame.depth);
      record["depth"] = rel.generic_string();
    } else {
      record["depth"] = nullptr;
    }
    if (frame.image_path) {
      record["image"] = fs::path(*frame.image_path).lexically_relative(dir).generic_string();
    }
    frames.push_back(std::move(record));
  }
  json manifest;
  manifest["id"] = scene.id;
  manifest["embedding_dim"] = scene.embedding_dim;
  manifest["frames"] = std::move(frames);
  if (scene.point_cloud) {
    WritePlyPoints(dir / "points.ply", *scene.point_cloud);
    manifest["point_cloud"] = "points.ply";
  }
  WriteFile(dir / kManifestName, manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Embeddings

namespace {

class ByteReader {
 public:
  ByteReader(const std::string& data, std::string file)
      : data_(data), file_(std::move(file)) {}

  template <typename T>
  T Read(const char* what) {
    Need(sizeof(T), what);
    T value;
    std::memcpy(&value, data_.data() + offset_, sizeof(T));
    offset_ += sizeof(T);
    return value;
  }

  std::string ReadBytes(std::size_t n, const char* what) {
    Need(n, what);
    std::string out = data_.substr(offset_, n);
    offset_ += n;
    return out;
  }

  std::size_t offset() const { return offset_; }
  bool AtEnd() const { return offset_ == data_.size(); }

 private:
  void Need(std::size_t n, const char* what) {
    if (offset_ + n > data_.size()) {
      throw MalformedFile(file_, offset_, std::string("truncated ") + what);
    }
  }

  const std::string& data_;
  std::string file_;
  std::size_t offset_ = 0;
};

static_assert(std::endian::native == std::endian::little,
              "embedding I/O assumes a little-endian host");

}  // namespace

void LoadEmbeddings(const fs::path& file, Scene& scene,
                    std::span<const std::string> query_ids) {
  const std::string data = ReadFile(file);
  ByteReader reader(data, file.string());
  if (reader.ReadBytes(4, "magic") != "EMB1") {
    throw MalformedFile(file.string(), 0, "bad magic, expected EMB1");
  }
  const auto dim = reader.Read<std::uint32_t>("dim");
  const auto count = reader.Read<std::uint32_t>("count");
  if (dim != static_cast<std::uint32_t>(scene.embedding_dim)) {
    throw Error(ErrorKind::kDimensionMismatch,
                file.string() + " has dim " + std::to_string(dim) +
                    ", manifest declares " + std::to_string(scene.embedding_dim));
  }
  const std::unordered_set<std::string> queries(query_ids.begin(), query_ids.end());
  std::unordered_set<std::string> seen;
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::size_t record_offset = reader.offset();
    const auto id_len = reader.Read<std::uint16_t>("id length");
    std::string id = reader.ReadBytes(id_len, "id");
    Eigen::VectorXf vec(dim);
    for (std::uint32_t i = 0; i < dim; ++i) vec[i] = reader.Read<float>("vector");
    if (!seen.insert(id).second) {
      throw MalformedFile(file.string(), record_offset, "duplicate id '" + id + "'");
    }
    if (!vec.allFinite()) {
      throw MalformedFile(file.string(), record_offset, "non-finite vector for '" + id + "'");
    }
    const double norm = vec.cast<double>().norm();
    if (norm < 1e-8) {
      throw Error(ErrorKind::kDegenerateVector, "embedding for '" + id + "'");
    }
    if (std::abs(norm - 1.0) > 0.05) {
      throw InvariantViolation("Frame", "embedding norm within 5% of 1 (id '" + id +
                                            "', norm " + std::to_string(norm) + ")");
    }
    vec = (vec.cast<double>() / norm).cast<float>();

    bool attached = false;
    for (Frame& frame : scene.frames) {
      if (frame.id == id) {
        frame.embedding = vec;
        attached = true;
        break;
      }
    }
    if (!attached) {
      if (!queries.count(id)) {
        throw Error(ErrorKind::kUnknownFrameId, "'" + id + "' in " + file.string());
      }
      scene.query_embeddings.emplace_back(id, vec);
    }
  }
  if (!reader.AtEnd()) {
    throw MalformedFile(file.string(), reader.offset(), "trailing bytes");
  }
}

void WriteEmbeddings(const fs::path& file, int dim,
                     std::span<const EmbeddingRecord> records) {
  std::string out = "EMB1";
  auto put = [&out](const auto& value) {
    out.append(reinterpret_cast<const char*>(&value), sizeof(value));
  };
  put(static_cast<std::uint32_t>(dim));
  put(static_cast<std::uint32_t>(records.size()));
  for (const EmbeddingRecord& rec : records) {
    if (rec.values.size() != static_cast<std::size_t>(dim)) {
      throw Error(ErrorKind::kDimensionMismatch, "record '" + rec.id + "'");
    }
    if (rec.id.size() > 0xffff) {
      throw Error(ErrorKind::kInvalidArgument, "id too long: " + rec.id);
    }
    put(static_cast<std::uint16_t>(rec.id.size()));
    out += rec.id;
    for (float v : rec.values) put(v);
  }
  WriteFile(file, out);
}

// ---------------------------------------------------------------------------
// Queries

std::vector<Query> LoadQueries(const fs::path& file) {
  const std::string name = file.string();
  const json doc = detail::ParseJsonFile(file);
  if (!doc.is_array()) detail::SchemaError(name, "queries file must be a list");
  std::vector<Query> queries;
  std::unordered_set<std::string> ids;
  for (const json& rec : doc) {
    detail::CheckKeys(rec, {"id", "scene_id", "text", "gt_box", "uniqueness",
                            "candidate_boxes"},
                      name);
    Query q;
    q.id = Get<std::string>(rec, "id", name);
    q.scene_id = Get<std::string>(rec, "scene_id", name);
    q.text = Get<std::string>(rec, "text", name);
    if (auto it = rec.find("gt_box"); it != rec.end() && !it->is_null()) {
      q.gt_box = detail::BoxFromJson(*it, name);
    }
    if (auto it = rec.find("uniqueness"); it != rec.end() && !it->is_null()) {
      const auto u = it->get<std::string>();
      if (u == "unique") {
        q.uniqueness = Uniqueness::kUnique;
      } else if (u == "multiple") {
        q.uniqueness = Uniqueness::kMultiple;
      } else {
        detail::SchemaError(name, "uniqueness must be 'unique' or 'multiple'");
      }
    }
    if (auto it = rec.find("candidate_boxes"); it != rec.end() && !it->is_null()) {
      std::vector<Box3> boxes;
      for (const json& b : *it) boxes.push_back(detail::BoxFromJson(b, name));
      q.candidate_boxes = std::move(boxes);
    }
    if (!ids.insert(q.id).second) {
      throw InvariantViolation("Query", "unique query ids ('" + q.id + "')");
    }
    q.Validate();
    queries.push_back(std::move(q));
  }
  return queries;
}

void SaveQueries(const fs::path& file, std::span<const Query> queries) {
  json doc = json::array();
  for (const Query& q : queries) {
    json rec;
    rec["id"] = q.id;
    rec["scene_id"] = q.scene_id;
    rec["text"] = q.text;
    if (q.gt_box) rec["gt_box"] = detail::BoxToJson(*q.gt_box);
    if (q.uniqueness) {
      rec["uniqueness"] = *q.uniqueness == Uniqueness::kUnique ? "unique" : "multiple";
    }
    if (q.candidate_boxes) {
      json boxes = json::array();
      for (const Box3& b : *q.candidate_boxes) boxes.push_back(detail::BoxToJson(b));
      rec["candidate_boxes"] = std::move(boxes);
    }
    doc.push_back(std::move(rec));
  }
  WriteFile(file, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Canonical serialization

namespace {

class Serializer {
 public:
  template <typename T>
  void Pod(const T& v) {
    out_.append(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void Str(const std::string& s) {
    Pod(static_cast<std::uint64_t>(s.size()));
    out_ += s;
  }
  void Flag(bool b) { Pod(static_cast<std::uint8_t>(b)); }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

}  // namespace

std::string SerializeScene(const Scene& scene) {
  Serializer s;
  s.Str(scene.id);
  s.Pod(static_cast<std::int32_t>(scene.embedding_dim));
  s.Pod(static_cast<std::uint64_t>(scene.frames.size()));
  for (const Frame& f : scene.frames) {
    s.Str(f.id);
    const Intrinsics& k = f.intrinsics;
    s.Pod(k.fx); s.Pod(k.fy); s.Pod(k.cx); s.Pod(k.cy);
    s.Pod(static_cast<std::int32_t>(k.width));
    s.Pod(static_cast<std::int32_t>(k.height));
    s.Flag(f.pose.has_value());
    if (f.pose) {
      const Eigen::Matrix4d m = f.pose->Matrix4();
      for (int i = 0; i < 16; ++i) s.Pod(m(i / 4, i % 4));
    }
    s.Flag(f.depth.has_value());
    if (f.depth) {
      s.Pod(static_cast<std::int32_t>(f.depth->width));
      s.Pod(static_cast<std::int32_t>(f.depth->height));
      for (float d : f.depth->values) s.Pod(d);
    }
    s.Flag(f.embedding.has_value());
    if (f.embedding) {
      for (Eigen::Index i = 0; i < f.embedding->size(); ++i) s.Pod((*f.embedding)[i]);
    }
    s.Flag(f.image_path.has_value());
    if (f.image_path) s.Str(*f.image_path);
  }
  s.Flag(scene.point_cloud.has_value());
  if (scene.point_cloud) {
    s.Pod(static_cast<std::uint64_t>(scene.point_cloud->size()));
    for (const Vec3& p : *scene.point_cloud) {
      s.Pod(p.x()); s.Pod(p.y()); s.Pod(p.z());
    }
  }
  s.Pod(static_cast<std::uint64_t>(scene.query_embeddings.size()));
  for (const auto& [id, vec] : scene.query_embeddings) {
    s.Str(id);
    for (Eigen::Index i = 0; i < vec.size(); ++i) s.Pod(vec[i]);
  }
  return s.Take();
}

std::string Fingerprint(std::string_view bytes) {
  // 64-bit FNV-1a.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace mvground
