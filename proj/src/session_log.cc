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

#include "prefgain/session_log.h"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <system_error>

namespace prefgain {
namespace {

std::string ChecksumInput(const LogRecord& r) {
  // %.17g keeps the timestamp exact across a round trip.
  char ts[32];
  std::snprintf(ts, sizeof(ts), "%.17g", r.timestamp);
  return r.type + '\n' + r.payload.dump() + '\n' + ts;
}

std::string Hex(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08x", v);
  return buf;
}

[[noreturn]] void ThrowErrno(const std::string& what) {
  throw std::system_error(errno, std::generic_category(), what);
}

}  // namespace

std::uint32_t RecordChecksum(const LogRecord& r) {
  const std::string s = ChecksumInput(r);
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(s.data()),
            static_cast<uInt>(s.size())));
}

std::string EncodeRecord(const LogRecord& r) {
  nlohmann::json j;
  j["type"] = r.type;
  j["payload"] = r.payload;
  j["timestamp"] = r.timestamp;
  j["checksum"] = Hex(RecordChecksum(r));
  return j.dump();
}

bool DecodeRecord(const std::string& line, LogRecord& out) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  auto type = j.find("type");
  auto payload = j.find("payload");
  auto ts = j.find("timestamp");
  auto sum = j.find("checksum");
  if (type == j.end() || payload == j.end() || ts == j.end() ||
      sum == j.end() || !type->is_string() || !ts->is_number() ||
      !sum->is_string()) {
    return false;
  }
  LogRecord r;
  r.type = type->get<std::string>();
  r.payload = *payload;
  r.timestamp = ts->get<double>();
  if (Hex(RecordChecksum(r)) != sum->get<std::string>()) return false;
  out = std::move(r);
  return true;
}

LoadedLog ReadLog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open session log " + path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  LoadedLog out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < content.size()) {
    ++line_no;
    const std::size_t nl = content.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::size_t end = terminated ? nl : content.size();
    const std::string line = content.substr(pos, end - pos);
    LogRecord r;
    if (terminated && DecodeRecord(line, r)) {
      out.records.push_back(std::move(r));
      pos = end + 1;
      out.valid_bytes = pos;
      continue;
    }
    // Only a torn final line is tolerated.
    const std::size_t rest = terminated ? end + 1 : end;
    if (rest < content.size()) {
      throw LogCorruptError(path + ":" + std::to_string(line_no) +
                            ": corrupt record before end of log");
    }
    out.dropped_tail = true;
    break;
  }
  return out;
}

SessionLog::SessionLog(std::string path, std::int64_t truncate_to)
    : path_(std::move(path)) {
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) ThrowErrno("cannot open " + path_);
  if (truncate_to >= 0 && ::ftruncate(fd_, truncate_to) != 0) {
    const int e = errno;
    ::close(fd_);
    errno = e;
    ThrowErrno("cannot truncate " + path_);
  }
}

SessionLog::~SessionLog() {
  if (fd_ >= 0) ::close(fd_);
}

void SessionLog::Append(const LogRecord& r) {
  const std::string line = EncodeRecord(r) + '\n';
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      ThrowErrno("write to " + path_);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) ThrowErrno("fsync " + path_);
}

}  // namespace prefgain
