// Copyright 2026 The prefgain Authors.
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

#include "prefgain/http_service.h"

#include <stdexcept>

#include "httplib.h"

namespace prefgain {
namespace {

using nlohmann::json;

SessionService::Response Error(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

int StatusFor(const SessionError& e) {
  return e.kind() == SessionError::Kind::kMalformed ? 400 : 409;
}

}  // namespace

SessionService::SessionService(Options options)
    : options_(std::move(options)) {}

SessionService::~SessionService() { Stop(); }

void SessionService::Start(const SessionConfig& cfg) {
  std::lock_guard<std::mutex> lock(write_mu_);
  session_ = std::make_unique<Session>(cfg, options_.log_path);
  Publish();
}

void SessionService::Resume() {
  std::lock_guard<std::mutex> lock(write_mu_);
  session_ = Session::Resume(options_.log_path);
  Publish();
}

void SessionService::Publish() {
  auto s = std::make_shared<Snapshot>();
  s->summary = session_->SummaryJson();
  s->current = s->summary["current_action"];
  s->current["iteration"] = s->summary["iteration"];
  s->current["completed"] = s->summary["completed"];
  s->history = session_->HistoryJson();
  s->posterior = session_->PosteriorJson();
  std::lock_guard<std::mutex> lock(snap_mu_);
  snap_ = std::move(s);
}

std::shared_ptr<const SessionService::Snapshot> SessionService::snapshot()
    const {
  std::lock_guard<std::mutex> lock(snap_mu_);
  return snap_;
}

SessionService::Response SessionService::PostSession(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) return Error(400, "request body is not valid JSON");
  SessionConfig cfg;
  try {
    cfg = SessionConfigFromJson(j, options_.base_dir);
  } catch (const std::exception& e) {
    return Error(400, e.what());
  }
  Start(cfg);
  return {201, snapshot()->summary};
}

SessionService::Response SessionService::PostFeedback(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) return Error(400, "request body is not valid JSON");
  std::lock_guard<std::mutex> lock(write_mu_);
  if (!session_) return Error(404, "no active session");
  try {
    if (j.is_object() && j.value("auto", false)) {
      FeedbackEvent e = session_->AutoFeedback();
      session_->Submit(std::move(e));
    } else {
      session_->Submit(FeedbackFromJson(j));
    }
  } catch (const SessionError& e) {
    return Error(StatusFor(e), e.what());
  } catch (const std::invalid_argument& e) {
    return Error(400, e.what());
  } catch (const std::exception& e) {
    return Error(500, e.what());
  }
  Publish();
  return {200, snapshot()->summary};
}

SessionService::Response SessionService::Handle(const std::string& method,
                                                const std::string& path,
                                                const std::string& body) {
  if (method == "POST" && path == "/session") return PostSession(body);
  if (method == "POST" && path == "/session/feedback") {
    return PostFeedback(body);
  }
  const bool known = path == "/session" || path == "/session/current-action" ||
                     path == "/session/history" ||
                     path == "/session/posterior" ||
                     path == "/session/feedback";
  if (!known) return Error(404, "no such endpoint " + path);
  if (method != "GET" || path == "/session/feedback") {
    return Error(405, method + " not allowed on " + path);
  }
  auto snap = snapshot();
  if (!snap) return Error(404, "no active session");
  if (path == "/session") return {200, snap->summary};
  if (path == "/session/current-action") return {200, snap->current};
  if (path == "/session/history") return {200, snap->history};
  return {200, snap->posterior};
}

void SessionService::InstallRoutes() {
  server_ = std::make_unique<httplib::Server>();
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    Response r = Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  for (const char* p : {"/session", "/session/feedback",
                        "/session/current-action", "/session/history",
                        "/session/posterior"}) {
    server_->Get(p, handler);
    server_->Post(p, handler);
  }
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
}

bool SessionService::Listen(const std::string& host, int port) {
  InstallRoutes();
  return server_->listen(host, port);
}

int SessionService::BindToAnyPort(const std::string& host) {
  InstallRoutes();
  return server_->bind_to_any_port(host);
}

bool SessionService::ListenAfterBind() { return server_->listen_after_bind(); }

void SessionService::Stop() {
  if (server_) server_->stop();
}

}  // namespace prefgain
