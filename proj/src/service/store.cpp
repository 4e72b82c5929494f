// Copyright 2026 The Lumen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "lumen/service/store.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <random>

#include "lumen/error.hpp"
#include "lumen/image_io.hpp"

namespace lumen::service {

namespace fs = std::filesystem;

namespace {

bool IsObjectId(std::string_view id) {
  return id.size() == kObjectIdLength &&
         std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

bool IsJobId(std::string_view id) {
  return !id.empty() && id.size() <= 64 &&
         std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || c == '-';
         });
}

std::uint32_t BigEndian32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

// Width, height and colour channels from the IHDR chunk of a stored PNG.
std::optional<StoredObject> HeaderInfo(std::span<const std::uint8_t> png) {
  if (png.size() < 33) return std::nullopt;
  const std::uint8_t color_type = png[25];
  StoredObject info;
  info.width = static_cast<int>(BigEndian32(png, 16));
  info.height = static_cast<int>(BigEndian32(png, 20));
  switch (color_type) {
    case 0: case 4: info.channels = 1; break;
    case 2: case 6: info.channels = 3; break;
    default: return std::nullopt;
  }
  return info;
}

}  // namespace

void WriteFileAtomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  static std::atomic<std::uint64_t> counter{0};
  thread_local std::mt19937_64 rng{std::random_device{}()};
  const fs::path tmp = path.parent_path() /
                       (".tmp-" + std::to_string(counter++) + "-" + std::to_string(rng() & 0xffffff) +
                        "-" + path.filename().string());
  WriteFileBytes(tmp, bytes);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, "cannot rename into " + path.string());
  }
}

nlohmann::json ToJson(const StoredObject& object) {
  return {{"id", object.id},
          {"width", object.width},
          {"height", object.height},
          {"channels", object.channels},
          {"sha256", object.sha256}};
}

ObjectStore::ObjectStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  for (const char* sub : {"images", "masks", "jobs"}) {
    fs::create_directories(root_ / sub, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot create " + (root_ / sub).string());
  }
  Reindex(ObjectKind::kImage);
  Reindex(ObjectKind::kMask);
}

fs::path ObjectStore::Dir(ObjectKind kind) const {
  return root_ / (kind == ObjectKind::kImage ? "images" : "masks");
}

void ObjectStore::Reindex(ObjectKind kind) {
  auto& index = kind == ObjectKind::kImage ? images_ : masks_;
  index.clear();
  for (const auto& entry : fs::directory_iterator(Dir(kind))) {
    const fs::path& p = entry.path();
    const std::string id = p.stem().string();
    if (p.extension() != ".png" || !IsObjectId(id)) continue;
    const auto bytes = ReadFileBytes(p);
    const std::string digest = Sha256Hex(bytes);
    auto info = HeaderInfo(bytes);
    if (digest.compare(0, kObjectIdLength, id) != 0 || !info) {
      std::cerr << "lumen: skipping corrupt object " << p << "\n";
      continue;
    }
    info->id = id;
    info->sha256 = digest;
    index.emplace(id, *info);
  }
}

StoredObject ObjectStore::Put(ObjectKind kind, std::span<const std::uint8_t> png, int width,
                              int height, int channels) {
  StoredObject object{"", width, height, channels, Sha256Hex(png)};
  object.id = object.sha256.substr(0, kObjectIdLength);
  std::unique_lock lock(mutex_);
  auto& index = kind == ObjectKind::kImage ? images_ : masks_;
  if (auto it = index.find(object.id); it != index.end()) return it->second;
  WriteFileAtomic(Dir(kind) / (object.id + ".png"), png);
  index.emplace(object.id, object);
  return object;
}

std::optional<StoredObject> ObjectStore::Find(ObjectKind kind, std::string_view id) const {
  std::shared_lock lock(mutex_);
  const auto& index = kind == ObjectKind::kImage ? images_ : masks_;
  if (auto it = index.find(id); it != index.end()) return it->second;
  return std::nullopt;
}

std::vector<StoredObject> ObjectStore::List(ObjectKind kind) const {
  std::shared_lock lock(mutex_);
  const auto& index = kind == ObjectKind::kImage ? images_ : masks_;
  std::vector<StoredObject> out;
  out.reserve(index.size());
  for (const auto& [id, object] : index) out.push_back(object);
  return out;
}

std::vector<std::uint8_t> ObjectStore::Read(ObjectKind kind, std::string_view id) const {
  if (!Find(kind, id)) throw Error(ErrorCode::kIoError, "no such object " + std::string(id));
  return ReadFileBytes(Dir(kind) / (std::string(id) + ".png"));
}

void ObjectStore::WriteJob(std::string_view id, const nlohmann::json& record) {
  if (!IsJobId(id)) throw Error(ErrorCode::kInvalidArgument, "bad job id");
  const std::string text = record.dump(2) + "\n";
  std::unique_lock lock(mutex_);
  WriteFileAtomic(root_ / "jobs" / (std::string(id) + ".json"),
                  std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<nlohmann::json> ObjectStore::LoadJobs() const {
  std::shared_lock lock(mutex_);
  std::vector<nlohmann::json> out;
  for (const auto& entry : fs::directory_iterator(root_ / "jobs")) {
    const fs::path& p = entry.path();
    if (p.extension() != ".json" || !IsJobId(p.stem().string())) continue;
    std::ifstream in(p);
    auto j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      std::cerr << "lumen: skipping unreadable job record " << p << "\n";
      continue;
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace lumen::service
