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


#include "lumen/service/job.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "lumen/error.hpp"

namespace lumen::service {

using nlohmann::json;

std::string_view JobStatusName(JobStatus status) {
  switch (status) {
    case JobStatus::kQueued: return "queued";
    case JobStatus::kRunning: return "running";
    case JobStatus::kDone: return "done";
    case JobStatus::kFailed: return "failed";
  }
  return "unknown";
}

std::optional<JobStatus> ParseJobStatus(std::string_view name) {
  for (auto s : {JobStatus::kQueued, JobStatus::kRunning, JobStatus::kDone, JobStatus::kFailed}) {
    if (JobStatusName(s) == name) return s;
  }
  return std::nullopt;
}

bool RestorationJob::Consistent() const {
  if ((status == JobStatus::kDone) != result_image_id.has_value()) return false;
  if ((status == JobStatus::kFailed) != error.has_value()) return false;
  return !feedback || status == JobStatus::kDone;
}

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  const auto millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() %
      1000;
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", utc.tm_year + 1900,
                utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec,
                static_cast<int>(millis));
  return buf;
}

namespace {

template <typename T>
void PutOptional(json& j, const char* key, const std::optional<T>& value) {
  j[key] = value ? json(*value) : json(nullptr);
}

std::optional<std::string> OptionalString(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("job field ") + key + " must be a string");
  }
  return j[key].get<std::string>();
}

std::string RequiredString(const json& j, const char* key) {
  auto value = OptionalString(j, key);
  if (!value) throw Error(ErrorCode::kInvalidArgument, std::string("job record lacks ") + key);
  return *value;
}

}  // namespace

json ToJson(const RestorationJob& job) {
  json j;
  j["job_id"] = job.job_id;
  j["sequence"] = job.sequence;
  j["method"] = std::string(MethodName(job.method));
  j["params"] = job.params;
  j["input_image_id"] = job.input_image_id;
  PutOptional(j, "mask_id", job.mask_id);
  PutOptional(j, "source_image_id", job.source_image_id);
  j["status"] = std::string(JobStatusName(job.status));
  PutOptional(j, "result_image_id", job.result_image_id);
  PutOptional(j, "error", job.error);
  j["created_at"] = job.created_at;
  PutOptional(j, "started_at", job.started_at);
  PutOptional(j, "finished_at", job.finished_at);
  if (job.feedback) {
    j["feedback"] = {{"rating", job.feedback->rating}, {"comment", job.feedback->comment}};
  } else {
    j["feedback"] = nullptr;
  }
  j["report"] = job.report.is_null() ? json::object() : job.report;
  return j;
}

RestorationJob JobFromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "job record must be an object");
  RestorationJob job;
  job.job_id = RequiredString(j, "job_id");
  if (j.contains("sequence") && j["sequence"].is_number_unsigned()) {
    job.sequence = j["sequence"].get<std::uint64_t>();
  }
  const auto method = ParseMethod(RequiredString(j, "method"));
  if (!method) throw Error(ErrorCode::kInvalidArgument, "job record has unknown method");
  job.method = *method;
  job.params = j.value("params", json::object());
  job.input_image_id = RequiredString(j, "input_image_id");
  job.mask_id = OptionalString(j, "mask_id");
  job.source_image_id = OptionalString(j, "source_image_id");
  const auto status = ParseJobStatus(RequiredString(j, "status"));
  if (!status) throw Error(ErrorCode::kInvalidArgument, "job record has unknown status");
  job.status = *status;
  job.result_image_id = OptionalString(j, "result_image_id");
  job.error = OptionalString(j, "error");
  job.created_at = RequiredString(j, "created_at");
  job.started_at = OptionalString(j, "started_at");
  job.finished_at = OptionalString(j, "finished_at");
  if (j.contains("feedback") && j["feedback"].is_object()) {
    const json& f = j["feedback"];
    job.feedback = Feedback{f.value("rating", 0), f.value("comment", std::string())};
  }
  job.report = j.value("report", json::object());
  return job;
}

}  // namespace lumen::service
