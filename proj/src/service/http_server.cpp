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


#include "lumen/service/http_server.hpp"

#include <httplib.h>

#include <iostream>

#include "lumen/error.hpp"

namespace lumen::service {

using nlohmann::json;

namespace {

constexpr char kPlaceholderPage[] = R"(<!doctype html>
<html lang="en">
<head><meta charset="utf-8"><title>Lumen restoration service</title></head>
<body>
<h1>Lumen restoration service</h1>
<p>The browser client is not installed. Start the server with
<code>--ui-dir</code> pointing at its build output, or use the REST API under
<code>/api</code>; <a href="/api/health">/api/health</a> reports status.</p>
</body>
</html>
)";

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& message) {
  SendJson(res, status, {{"error", message}});
}

std::span<const std::uint8_t> BodyBytes(const std::string& body) {
  return {reinterpret_cast<const std::uint8_t*>(body.data()), body.size()};
}

// Raw body, or the first uploaded file of a multipart form.
std::string UploadedBytes(const httplib::Request& req) {
  if (req.is_multipart_form_data()) {
    for (const char* key : {"file", "image", "mask"}) {
      if (req.has_file(key)) return req.get_file_value(key).content;
    }
    if (!req.files.empty()) return req.files.begin()->second.content;
    throw ServiceError(400, "multipart upload without a file");
  }
  return req.body;
}

json ParseJsonBody(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ServiceError(400, "request body is not valid JSON");
  return j;
}

// Runs `handler`, mapping service and library failures to HTTP statuses.
template <typename Handler>
httplib::Server::Handler Guard(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const ServiceError& e) {
      SendError(res, e.status(), e.what());
    } catch (const Error& e) {
      const int status = e.code() == ErrorCode::kDecodeError ||
                                 e.code() == ErrorCode::kUnsupportedFormat
                             ? 400
                             : 500;
      SendError(res, status, e.what());
    } catch (const std::exception& e) {
      SendError(res, 500, e.what());
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  RestoreService& service;
  httplib::Server server;
};

HttpServer::HttpServer(RestoreService& service, std::optional<std::filesystem::path> ui_dir)
    : impl_(new Impl{service, {}}) {
  httplib::Server& s = impl_->server;
  RestoreService& svc = impl_->service;

  s.set_payload_max_length(svc.config().max_upload_bytes);
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Get("/api/health", Guard([&svc](const httplib::Request&, httplib::Response& res) {
          SendJson(res, 200, svc.Health());
        }));

  s.Post("/api/images", Guard([&svc](const httplib::Request& req, httplib::Response& res) {
           const std::string bytes = UploadedBytes(req);
           SendJson(res, 201, svc.UploadImage(BodyBytes(bytes)));
         }));
  s.Get("/api/images", Guard([&svc](const httplib::Request&, httplib::Response& res) {
          SendJson(res, 200, svc.ListImages());
        }));
  s.Get(R"(/api/images/([0-9a-zA-Z]+))",
        Guard([&svc](const httplib::Request& req, httplib::Response& res) {
          const auto png = svc.ImagePng(req.matches[1]);
          res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
        }));

  s.Post("/api/masks", Guard([&svc](const httplib::Request& req, httplib::Response& res) {
           const std::string type = req.get_header_value("Content-Type");
           if (type.rfind("application/json", 0) == 0) {
             SendJson(res, 201, svc.CreateMask(ParseJsonBody(req)));
             return;
           }
           std::optional<std::string> image_id;
           if (req.has_param("image_id")) image_id = req.get_param_value("image_id");
           if (req.is_multipart_form_data() && req.has_file("image_id")) {
             image_id = req.get_file_value("image_id").content;
           }
           const std::string bytes = UploadedBytes(req);
           SendJson(res, 201, svc.UploadMask(BodyBytes(bytes), image_id));
         }));
  s.Get("/api/masks", Guard([&svc](const httplib::Request&, httplib::Response& res) {
          SendJson(res, 200, svc.ListMasks());
        }));
  s.Get(R"(/api/masks/([0-9a-zA-Z]+))",
        Guard([&svc](const httplib::Request& req, httplib::Response& res) {
          const auto png = svc.MaskPng(req.matches[1]);
          res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
        }));

  s.Post("/api/jobs", Guard([&svc](const httplib::Request& req, httplib::Response& res) {
           SendJson(res, 202, svc.SubmitJob(ParseJsonBody(req)));
         }));
  s.Get("/api/jobs", Guard([&svc](const httplib::Request&, httplib::Response& res) {
          SendJson(res, 200, svc.ListJobs());
        }));
  s.Get(R"(/api/jobs/([0-9a-z-]+))",
        Guard([&svc](const httplib::Request& req, httplib::Response& res) {
          SendJson(res, 200, svc.GetJob(req.matches[1]));
        }));
  s.Post(R"(/api/jobs/([0-9a-z-]+)/feedback)",
         Guard([&svc](const httplib::Request& req, httplib::Response& res) {
           SendJson(res, 200, svc.PostFeedback(req.matches[1], ParseJsonBody(req)));
         }));

  bool mounted = false;
  if (ui_dir) {
    mounted = s.set_mount_point("/", ui_dir->string());
    if (!mounted) std::cerr << "lumen: UI directory " << *ui_dir << " not found\n";
  }
  if (!mounted) {
    s.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      const char* reason = httplib::status_message(res.status);
      res.set_content(json{{"error", reason}}.dump(), "application/json");
    }
  });
}

HttpServer::~HttpServer() { Stop(); }

bool HttpServer::Listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int HttpServer::BindToAnyPort(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpServer::ListenAfterBind() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace lumen::service
