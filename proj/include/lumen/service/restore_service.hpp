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

#ifndef LUMEN_SERVICE_RESTORE_SERVICE_HPP_
#define LUMEN_SERVICE_RESTORE_SERVICE_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lumen/service/job.hpp"
#include "lumen/service/store.hpp"

namespace lumen::service {

/// A request failure with the HTTP status it maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

struct ServiceConfig {
  std::filesystem::path data_dir = "lumen-data";
  int workers = 2;
  std::size_t max_upload_bytes = std::size_t{64} << 20;
};

/// Transport-independent core of the job service. Every method is safe to
/// call from concurrent request threads; restoration jobs run on a fixed
/// pool of workers that take jobs in submission order.
class RestoreService {
 public:
  /// Opens (or creates) the data directory, reloads job records and
  /// requeues jobs that were queued or running when the process stopped.
  explicit RestoreService(ServiceConfig config);
  ~RestoreService();

  RestoreService(const RestoreService&) = delete;
  RestoreService& operator=(const RestoreService&) = delete;

  const ServiceConfig& config() const { return config_; }

  /// 201-style payload {image_id, width, height, channels, sha256}.
  nlohmann::json UploadImage(std::span<const std::uint8_t> bytes);
  nlohmann::json ListImages() const;
  std::vector<std::uint8_t> ImagePng(const std::string& id) const;

  /// Region growing from {image_id, seeds:[{x,y}], tolerance, dilate_radius?,
  /// close_holes?, damage_class?}. Returns {mask_id, width, height,
  /// count_true, fraction}.
  nlohmann::json CreateMask(const nlohmann::json& request);
  /// Stores a client-painted mask. Pixels >= 128 are true; the stored PNG is
  /// the canonical 0/255 encoding. When `image_id` is given the sizes must
  /// agree.
  nlohmann::json UploadMask(std::span<const std::uint8_t> png,
                            const std::optional<std::string>& image_id);
  nlohmann::json ListMasks() const;
  std::vector<std::uint8_t> MaskPng(const std::string& id) const;

  /// Validates and enqueues {method, input_image_id, mask_id?,
  /// source_image_id?, params?}. Method fields may sit at the top level or
  /// inside "params".
  nlohmann::json SubmitJob(const nlohmann::json& spec);
  nlohmann::json GetJob(const std::string& id) const;
  nlohmann::json ListJobs() const;
  nlohmann::json PostFeedback(const std::string& id, const nlohmann::json& body);

  nlohmann::json Health() const;

  /// Blocks until the job is done or failed, or the timeout passes.
  /// Returns whether it finished.
  bool WaitForJob(const std::string& id, std::chrono::milliseconds timeout) const;

 private:
  void WorkerLoop();
  void RunJob(const std::string& id);
  void Persist(const RestorationJob& job);
  RestorationJob Snapshot(const std::string& id) const;
  std::string NewJobId();

  ServiceConfig config_;
  ObjectStore store_;

  mutable std::mutex mutex_;
  mutable std::condition_variable job_changed_;
  std::condition_variable queue_ready_;
  std::map<std::string, RestorationJob> jobs_;
  std::deque<std::string> queue_;
  std::uint64_t next_sequence_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace lumen::service

#endif  // LUMEN_SERVICE_RESTORE_SERVICE_HPP_
