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

#ifndef LUMEN_SERVICE_HTTP_SERVER_HPP_
#define LUMEN_SERVICE_HTTP_SERVER_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "lumen/service/restore_service.hpp"

namespace lumen::service {

/// REST front end over a RestoreService.
///
///   POST /api/images               raw PNG body (or multipart field "file")
///   GET  /api/images               list
///   GET  /api/images/{id}          PNG
///   POST /api/masks                JSON region-growing request, or a PNG body
///                                  (optional ?image_id= for a size check)
///   GET  /api/masks                list
///   GET  /api/masks/{id}           PNG
///   POST /api/jobs                 job spec
///   GET  /api/jobs                 list
///   GET  /api/jobs/{id}            record
///   POST /api/jobs/{id}/feedback   {rating, comment}
///   GET  /api/health
///
/// Static files under `ui_dir` are served at `/`; without one a minimal
/// index page is returned. CORS is open to any origin.
class HttpServer {
 public:
  HttpServer(RestoreService& service, std::optional<std::filesystem::path> ui_dir);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Blocks serving requests until Stop(). Returns false if binding fails.
  bool Listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1); follow with ListenAfterBind.
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lumen::service

#endif  // LUMEN_SERVICE_HTTP_SERVER_HPP_
