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

#ifndef LUMEN_SERVICE_JOB_HPP_
#define LUMEN_SERVICE_JOB_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lumen/restore.hpp"

namespace lumen::service {

enum class JobStatus { kQueued, kRunning, kDone, kFailed };

std::string_view JobStatusName(JobStatus status);
std::optional<JobStatus> ParseJobStatus(std::string_view name);

struct Feedback {
  int rating = 0;
  std::string comment;
};

struct RestorationJob {
  std::string job_id;
  std::uint64_t sequence = 0;  // submission order, survives restarts
  RestorationMethod method = RestorationMethod::kHarmonic;
  nlohmann::json params;  // canonical parameters, including "method"
  std::string input_image_id;
  std::optional<std::string> mask_id;
  std::optional<std::string> source_image_id;
  JobStatus status = JobStatus::kQueued;
  std::optional<std::string> result_image_id;
  std::optional<std::string> error;
  std::string created_at;
  std::optional<std::string> started_at;
  std::optional<std::string> finished_at;
  std::optional<Feedback> feedback;
  nlohmann::json report;  // solver diagnostics of a finished run

  /// done <=> result present, failed <=> error present, feedback only on done.
  bool Consistent() const;
};

nlohmann::json ToJson(const RestorationJob& job);

/// Throws lumen::Error(kInvalidArgument) on a malformed record.
RestorationJob JobFromJson(const nlohmann::json& j);

/// Current UTC time as ISO 8601 with milliseconds.
std::string UtcTimestamp();

}  // namespace lumen::service

#endif  // LUMEN_SERVICE_JOB_HPP_
