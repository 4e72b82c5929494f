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


#include "lumen/service/restore_service.hpp"

#include <algorithm>
#include <iostream>
#include <random>

#include "lumen/damage_detect.hpp"
#include "lumen/error.hpp"
#include "lumen/image_io.hpp"
#include "lumen/restore.hpp"
#include "lumen/simd/kernels.hpp"

namespace lumen::service {

using nlohmann::json;

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

[[noreturn]] void Fail(int status, const std::string& message) {
  throw ServiceError(status, message);
}

void CheckUploadSize(std::size_t size, std::size_t cap) {
  if (size > cap) {
    Fail(413, "payload of " + std::to_string(size) + " bytes exceeds the " +
                  std::to_string(cap) + " byte limit");
  }
}

void RequirePng(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || !std::equal(std::begin(kPngSignature), std::end(kPngSignature),
                                      bytes.begin())) {
    Fail(400, "body is not a PNG image");
  }
}

std::string RequiredId(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
    Fail(422, std::string(key) + " is required");
  }
  return j[key].get<std::string>();
}

std::optional<std::string> OptionalId(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string() || j[key].get<std::string>().empty()) {
    Fail(422, std::string(key) + " must be a string id");
  }
  return j[key].get<std::string>();
}

PixelCoord ParseSeed(const json& s) {
  if (s.is_object() && s.contains("x") && s.contains("y") && s["x"].is_number_integer() &&
      s["y"].is_number_integer()) {
    return {s["x"].get<int>(), s["y"].get<int>()};
  }
  if (s.is_array() && s.size() == 2 && s[0].is_number_integer() && s[1].is_number_integer()) {
    return {s[0].get<int>(), s[1].get<int>()};
  }
  Fail(422, "each seed must be {\"x\": int, \"y\": int}");
}

json MaskSummary(const StoredObject& stored, const BinaryMask& mask) {
  const MaskStats stats = mask_stats(mask);
  return {{"mask_id", stored.id},
          {"width", stored.width},
          {"height", stored.height},
          {"count_true", stats.count_true},
          {"fraction", stats.fraction}};
}

}  // namespace

RestoreService::RestoreService(ServiceConfig config)
    : config_(std::move(config)), store_(config_.data_dir) {
  if (config_.workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");

  std::vector<RestorationJob> restored;
  for (const json& record : store_.LoadJobs()) {
    try {
      restored.push_back(JobFromJson(record));
    } catch (const Error& e) {
      std::cerr << "lumen: ignoring job record: " << e.what() << "\n";
    }
  }
  std::sort(restored.begin(), restored.end(),
            [](const auto& a, const auto& b) { return a.sequence < b.sequence; });
  for (RestorationJob& job : restored) {
    next_sequence_ = std::max(next_sequence_, job.sequence + 1);
    if (job.status == JobStatus::kRunning) {
      // Interrupted mid-run: start over.
      job.status = JobStatus::kQueued;
      job.started_at.reset();
      Persist(job);
    }
    if (job.status == JobStatus::kQueued) queue_.push_back(job.job_id);
    jobs_.emplace(job.job_id, std::move(job));
  }

  workers_.reserve(config_.workers);
  for (int i = 0; i < config_.workers; ++i) workers_.emplace_back([this] { WorkerLoop(); });
}

RestoreService::~RestoreService() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  queue_ready_.notify_all();
  for (std::thread& t : workers_) t.join();
}

json RestoreService::UploadImage(std::span<const std::uint8_t> bytes) {
  CheckUploadSize(bytes.size(), config_.max_upload_bytes);
  RequirePng(bytes);
  RasterImage image;
  try {
    image = decode_image(bytes);
  } catch (const Error& e) {
    Fail(400, e.what());
  }
  const StoredObject stored =
      store_.Put(ObjectKind::kImage, bytes, image.width(), image.height(), image.channels());
  return {{"image_id", stored.id},
          {"width", stored.width},
          {"height", stored.height},
          {"channels", stored.channels},
          {"sha256", stored.sha256}};
}

json RestoreService::ListImages() const {
  json out = json::array();
  for (const StoredObject& o : store_.List(ObjectKind::kImage)) out.push_back(ToJson(o));
  return {{"images", out}};
}

std::vector<std::uint8_t> RestoreService::ImagePng(const std::string& id) const {
  if (!store_.Find(ObjectKind::kImage, id)) Fail(404, "unknown image " + id);
  return store_.Read(ObjectKind::kImage, id);
}

json RestoreService::CreateMask(const json& request) {
  if (!request.is_object()) Fail(422, "mask request must be a JSON object");
  const std::string image_id = RequiredId(request, "image_id");
  if (!store_.Find(ObjectKind::kImage, image_id)) Fail(404, "unknown image " + image_id);

  SeedSet seeds;
  if (request.contains("seeds")) {
    if (!request["seeds"].is_array()) Fail(422, "seeds must be an array");
    for (const json& s : request["seeds"]) seeds.seeds.push_back(ParseSeed(s));
  }
  if (!request.contains("tolerance") || !request["tolerance"].is_number()) {
    Fail(422, "tolerance must be a number");
  }
  seeds.tolerance = request["tolerance"].get<double>();
  if (!(seeds.tolerance >= 0.0)) Fail(422, "tolerance must be >= 0");
  seeds.damage_class = DamageClass::kLacuna;
  if (request.contains("damage_class") && !request["damage_class"].is_null()) {
    const auto cls = request["damage_class"].is_string()
                         ? ParseDamageClass(request["damage_class"].get<std::string>())
                         : std::nullopt;
    if (!cls) Fail(422, "damage_class must be lacuna, degradation, abrasion or overpaint");
    seeds.damage_class = *cls;
  }
  int dilate_radius = 0;
  if (request.contains("dilate_radius") && !request["dilate_radius"].is_null()) {
    if (!request["dilate_radius"].is_number_integer() || request["dilate_radius"].get<int>() < 0) {
      Fail(422, "dilate_radius must be a non-negative integer");
    }
    dilate_radius = request["dilate_radius"].get<int>();
  }
  bool fill_holes = false;
  if (request.contains("close_holes") && !request["close_holes"].is_null()) {
    if (!request["close_holes"].is_boolean()) Fail(422, "close_holes must be a boolean");
    fill_holes = request["close_holes"].get<bool>();
  }

  const RasterImage image = decode_image(store_.Read(ObjectKind::kImage, image_id));
  BinaryMask mask;
  try {
    mask = grow_region(image, seeds);
  } catch (const Error& e) {
    Fail(422, e.what());
  }
  if (dilate_radius > 0) mask = dilate_mask(mask, dilate_radius);
  if (fill_holes) mask = close_holes(mask);

  const StoredObject stored =
      store_.Put(ObjectKind::kMask, encode_mask_png(mask), mask.width(), mask.height(), 1);
  json out = MaskSummary(stored, mask);
  out["damage_class"] = std::string(DamageClassName(seeds.damage_class));
  return out;
}

json RestoreService::UploadMask(std::span<const std::uint8_t> png,
                                const std::optional<std::string>& image_id) {
  CheckUploadSize(png.size(), config_.max_upload_bytes);
  RequirePng(png);
  BinaryMask mask;
  try {
    mask = decode_mask(png);
  } catch (const Error& e) {
    Fail(400, e.what());
  }
  if (image_id) {
    const auto image = store_.Find(ObjectKind::kImage, *image_id);
    if (!image) Fail(404, "unknown image " + *image_id);
    if (image->width != mask.width() || image->height != mask.height()) {
      Fail(422, "mask size differs from image " + *image_id);
    }
  }
  const StoredObject stored =
      store_.Put(ObjectKind::kMask, encode_mask_png(mask), mask.width(), mask.height(), 1);
  return MaskSummary(stored, mask);
}

json RestoreService::ListMasks() const {
  json out = json::array();
  for (const StoredObject& o : store_.List(ObjectKind::kMask)) out.push_back(ToJson(o));
  return {{"masks", out}};
}

std::vector<std::uint8_t> RestoreService::MaskPng(const std::string& id) const {
  if (!store_.Find(ObjectKind::kMask, id)) Fail(404, "unknown mask " + id);
  return store_.Read(ObjectKind::kMask, id);
}

json RestoreService::SubmitJob(const json& spec) {
  if (!spec.is_object()) Fail(422, "job spec must be a JSON object");
  json merged = spec;
  merged.erase("params");
  if (spec.contains("params") && !spec["params"].is_null()) {
    if (!spec["params"].is_object()) Fail(422, "params must be an object");
    merged.update(spec["params"]);
  }
  RestorationParams params;
  try {
    params = ParseRestorationParams(merged);
  } catch (const Error& e) {
    Fail(422, e.what());
  }

  RestorationJob job;
  job.method = params.method;
  job.params = ToJson(params);
  job.input_image_id = RequiredId(spec, "input_image_id");
  job.mask_id = OptionalId(spec, "mask_id");
  job.source_image_id = OptionalId(spec, "source_image_id");

  const auto input = store_.Find(ObjectKind::kImage, job.input_image_id);
  if (!input) Fail(404, "unknown image " + job.input_image_id);
  const auto same_size = [&](const StoredObject& o) {
    return o.width == input->width && o.height == input->height;
  };
  if (params.NeedsMask()) {
    if (!job.mask_id) Fail(422, std::string(MethodName(params.method)) + " requires mask_id");
    const auto mask = store_.Find(ObjectKind::kMask, *job.mask_id);
    if (!mask) Fail(404, "unknown mask " + *job.mask_id);
    if (!same_size(*mask)) Fail(422, "mask size differs from the input image");
  }
  if (params.NeedsSource()) {
    if (!job.source_image_id) Fail(422, "osmosis requires source_image_id");
    const auto source = store_.Find(ObjectKind::kImage, *job.source_image_id);
    if (!source) Fail(404, "unknown image " + *job.source_image_id);
    if (!same_size(*source)) Fail(422, "source size differs from the input image");
    if (params.region != "full") {
      const auto region = store_.Find(ObjectKind::kMask, params.region);
      if (!region) Fail(404, "unknown region mask " + params.region);
      if (!same_size(*region)) Fail(422, "region size differs from the input image");
    }
  }

  std::lock_guard lock(mutex_);
  job.job_id = NewJobId();
  job.sequence = next_sequence_++;
  job.created_at = UtcTimestamp();
  Persist(job);
  queue_.push_back(job.job_id);
  jobs_.emplace(job.job_id, job);
  queue_ready_.notify_one();
  return {{"job_id", job.job_id}, {"status", std::string(JobStatusName(job.status))}};
}

json RestoreService::GetJob(const std::string& id) const { return ToJson(Snapshot(id)); }

json RestoreService::ListJobs() const {
  std::vector<RestorationJob> all;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, job] : jobs_) all.push_back(job);
  }
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.sequence < b.sequence; });
  json out = json::array();
  for (const RestorationJob& job : all) out.push_back(ToJson(job));
  return {{"jobs", out}};
}

json RestoreService::PostFeedback(const std::string& id, const json& body) {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) Fail(404, "unknown job " + id);
  RestorationJob& job = it->second;
  if (job.status != JobStatus::kDone) {
    Fail(409, "feedback needs a finished job; job is " + std::string(JobStatusName(job.status)));
  }
  if (!body.is_object() || !body.contains("rating") || !body["rating"].is_number_integer()) {
    Fail(422, "rating must be an integer from 1 to 5");
  }
  const int rating = body["rating"].get<int>();
  if (rating < 1 || rating > 5) Fail(422, "rating must be an integer from 1 to 5");
  std::string comment;
  if (body.contains("comment") && !body["comment"].is_null()) {
    if (!body["comment"].is_string()) Fail(422, "comment must be a string");
    comment = body["comment"].get<std::string>();
  }
  RestorationJob updated = job;
  updated.feedback = Feedback{rating, comment};
  Persist(updated);
  job = std::move(updated);
  job_changed_.notify_all();
  return ToJson(job);
}

json RestoreService::Health() const {
  std::lock_guard lock(mutex_);
  std::size_t running = 0;
  for (const auto& [id, job] : jobs_) running += job.status == JobStatus::kRunning;
  return {{"status", "ok"},
          {"workers", config_.workers},
          {"queued", queue_.size()},
          {"running", running},
          {"jobs", jobs_.size()},
          {"simd", std::string(simd::BackendName(simd::Active().backend))}};
}

bool RestoreService::WaitForJob(const std::string& id, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  if (jobs_.find(id) == jobs_.end()) Fail(404, "unknown job " + id);
  return job_changed_.wait_for(lock, timeout, [&] {
    const JobStatus s = jobs_.at(id).status;
    return s == JobStatus::kDone || s == JobStatus::kFailed;
  });
}

void RestoreService::WorkerLoop() {
  for (;;) {
    std::string id;
    {
      std::unique_lock lock(mutex_);
      queue_ready_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      RestorationJob& job = jobs_.at(id);
      job.status = JobStatus::kRunning;
      job.started_at = UtcTimestamp();
      Persist(job);
      job_changed_.notify_all();
    }
    RunJob(id);
  }
}

void RestoreService::RunJob(const std::string& id) {
  const RestorationJob job = Snapshot(id);
  std::optional<std::string> result_id;
  json report;
  std::string error;
  try {
    const RestorationParams params = ParseRestorationParams(job.params);
    const RasterImage image = decode_image(store_.Read(ObjectKind::kImage, job.input_image_id));
    std::optional<BinaryMask> mask;
    std::optional<RasterImage> source;
    std::optional<BinaryMask> region;
    if (job.mask_id) mask = decode_mask(store_.Read(ObjectKind::kMask, *job.mask_id));
    if (job.source_image_id) {
      source = decode_image(store_.Read(ObjectKind::kImage, *job.source_image_id));
    }
    if (params.NeedsSource() && params.region != "full") {
      region = decode_mask(store_.Read(ObjectKind::kMask, params.region));
    }
    RestorationOutcome outcome =
        RunRestoration(params, image, mask ? &*mask : nullptr, source ? &*source : nullptr, region);
    const StoredObject stored =
        store_.Put(ObjectKind::kImage, encode_png(outcome.image), outcome.image.width(),
                   outcome.image.height(), outcome.image.channels());
    result_id = stored.id;
    report = std::move(outcome.report);
  } catch (const std::exception& e) {
    error = e.what();
    if (error.empty()) error = "restoration failed";
  }

  std::lock_guard lock(mutex_);
  RestorationJob& current = jobs_.at(id);
  current.finished_at = UtcTimestamp();
  if (result_id) {
    current.status = JobStatus::kDone;
    current.result_image_id = result_id;
    current.report = std::move(report);
  } else {
    current.status = JobStatus::kFailed;
    current.error = error;
  }
  Persist(current);
  job_changed_.notify_all();
}

void RestoreService::Persist(const RestorationJob& job) { store_.WriteJob(job.job_id, ToJson(job)); }

RestorationJob RestoreService::Snapshot(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) Fail(404, "unknown job " + id);
  return it->second;
}

std::string RestoreService::NewJobId() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char kHex[] = "0123456789abcdef";
  for (;;) {
    std::string id(16, '0');
    std::uint64_t bits = rng();
    for (char& c : id) {
      c = kHex[bits & 0xf];
      bits >>= 4;
    }
    if (jobs_.find(id) == jobs_.end()) return id;
  }
}

}  // namespace lumen::service
