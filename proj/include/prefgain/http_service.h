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

#ifndef PREFGAIN_HTTP_SERVICE_H_
#define PREFGAIN_HTTP_SERVICE_H_

#include <memory>
#include <mutex>
#include <string>

#include "json.hpp"
#include "prefgain/session.h"

namespace httplib {
class Server;
}

namespace prefgain {

// Hosts at most one session behind a JSON API:
//   GET  /session                 summary of the current state
//   POST /session                 start a session from a config object
//   POST /session/feedback        feedback event, or {"auto": true}
//   GET  /session/current-action
//   GET  /session/history
//   GET  /session/posterior       mean and stddev per visited action
//
// Mutations are serialized by one lock; reads are answered from the last
// published snapshot and never wait for a posterior fit.
class SessionService {
 public:
  struct Options {
    std::string log_path;  // empty: no persistence
    std::string base_dir;  // resolves relative grid files in POST /session
  };

  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  explicit SessionService(Options options);
  ~SessionService();

  // Starts (replacing any existing session) or resumes from the log.
  void Start(const SessionConfig& cfg);
  void Resume();

  // Transport-independent request handling.
  Response Handle(const std::string& method, const std::string& path,
                  const std::string& body);

  // Blocks until Stop(). Returns false if the address cannot be bound.
  bool Listen(const std::string& host, int port);
  // Binds an ephemeral port for tests; serve with ListenAfterBind().
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  void Stop();

 private:
  struct Snapshot {
    nlohmann::json summary;
    nlohmann::json current;
    nlohmann::json history;
    nlohmann::json posterior;
  };

  void Publish();  // requires write_mu_
  std::shared_ptr<const Snapshot> snapshot() const;
  Response PostSession(const std::string& body);
  Response PostFeedback(const std::string& body);
  void InstallRoutes();

  Options options_;
  std::mutex write_mu_;
  std::unique_ptr<Session> session_;
  mutable std::mutex snap_mu_;
  std::shared_ptr<const Snapshot> snap_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace prefgain

#endif  // PREFGAIN_HTTP_SERVICE_H_
