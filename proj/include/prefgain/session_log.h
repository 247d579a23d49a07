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

#ifndef PREFGAIN_SESSION_LOG_H_
#define PREFGAIN_SESSION_LOG_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace prefgain {

// One line of the append-only JSONL log:
//   {"type": ..., "payload": {...}, "timestamp": <s>, "checksum": "<crc32>"}
// The checksum covers type, payload and timestamp in their serialized form.
struct LogRecord {
  std::string type;
  nlohmann::json payload;
  double timestamp = 0.0;
};

class LogCorruptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint32_t RecordChecksum(const LogRecord& r);
std::string EncodeRecord(const LogRecord& r);
// Returns false if the line is not a complete, checksummed record.
bool DecodeRecord(const std::string& line, LogRecord& out);

struct LoadedLog {
  std::vector<LogRecord> records;
  // True if an incomplete trailing line was found (and ignored).
  bool dropped_tail = false;
  std::uint64_t valid_bytes = 0;
};

// Reads every record. A bad final line is treated as a torn write and
// dropped; a bad line followed by good ones throws LogCorruptError.
LoadedLog ReadLog(const std::string& path);

// Appends records with one write(2) per line followed by fsync.
class SessionLog {
 public:
  // Opens for appending, creating the file if needed. If `truncate_to` is
  // given the file is first cut back to that many bytes (used to discard a
  // torn tail found by ReadLog).
  explicit SessionLog(std::string path, std::int64_t truncate_to = -1);
  ~SessionLog();
  SessionLog(const SessionLog&) = delete;
  SessionLog& operator=(const SessionLog&) = delete;

  void Append(const LogRecord& r);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  int fd_ = -1;
};

}  // namespace prefgain

#endif  // PREFGAIN_SESSION_LOG_H_
