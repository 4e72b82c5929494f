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

#ifndef LUMEN_SERVICE_STORE_HPP_
#define LUMEN_SERVICE_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lumen::service {

/// Lowercase hex SHA-256 of `bytes`.
std::string Sha256Hex(std::span<const std::uint8_t> bytes);

/// Length of the digest prefix used as an object id.
inline constexpr std::size_t kObjectIdLength = 16;

/// Writes `bytes` to a temporary sibling and renames it over `path`, so
/// readers see either the old file or the complete new one.
void WriteFileAtomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

enum class ObjectKind { kImage, kMask };

struct StoredObject {
  std::string id;
  int width = 0;
  int height = 0;
  int channels = 0;
  std::string sha256;
};

nlohmann::json ToJson(const StoredObject& object);

/// Flat on-disk store:
///
///   <root>/images/<id>.png
///   <root>/masks/<id>.png
///   <root>/jobs/<id>.json
///
/// Images and masks are content addressed by the digest prefix of their PNG
/// bytes. The in-memory index is rebuilt from the directory on construction.
/// Reads may run concurrently; writes are serialized.
class ObjectStore {
 public:
  explicit ObjectStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  /// Stores PNG bytes that have already been validated by the caller.
  /// Re-putting identical bytes returns the existing entry.
  StoredObject Put(ObjectKind kind, std::span<const std::uint8_t> png, int width,
                   int height, int channels);

  std::optional<StoredObject> Find(ObjectKind kind, std::string_view id) const;
  std::vector<StoredObject> List(ObjectKind kind) const;
  std::vector<std::uint8_t> Read(ObjectKind kind, std::string_view id) const;

  void WriteJob(std::string_view id, const nlohmann::json& record);
  std::vector<nlohmann::json> LoadJobs() const;

 private:
  std::filesystem::path Dir(ObjectKind kind) const;
  void Reindex(ObjectKind kind);

  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, StoredObject, std::less<>> images_;
  std::map<std::string, StoredObject, std::less<>> masks_;
};

}  // namespace lumen::service

#endif  // LUMEN_SERVICE_STORE_HPP_
