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

#include "prefgain/grid_config.h"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace prefgain {
namespace {

std::string_view Trim(std::string_view s) {
  const char* ws = " \t\r";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Fail(int line, const std::string& msg) {
  throw std::invalid_argument("grid config line " + std::to_string(line) +
                              ": " + msg);
}

template <typename T>
T ParseNumber(std::string_view s, int line) {
  s = Trim(s);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    Fail(line, "cannot parse number '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

ActionGrid ParseGridConfig(std::string_view text) {
  std::vector<DimensionSpec> dims;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) Fail(line_no, "expected '='");
    std::string_view name = Trim(line.substr(0, eq));
    if (name.empty() || name.find_first_of(" \t") != std::string_view::npos) {
      Fail(line_no, "bad dimension name");
    }
    std::vector<std::string_view> fields;
    std::string_view rest = line.substr(eq + 1);
    while (true) {
      std::size_t comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (fields.size() != 3) Fail(line_no, "expected 'lower, upper, count'");

    DimensionSpec spec;
    spec.name = std::string(name);
    spec.lower = ParseNumber<double>(fields[0], line_no);
    spec.upper = ParseNumber<double>(fields[1], line_no);
    spec.count = ParseNumber<int>(fields[2], line_no);
    if (!(spec.lower < spec.upper)) Fail(line_no, "lower must be below upper");
    if (spec.count < 2) Fail(line_no, "count must be at least 2");
    dims.push_back(std::move(spec));
    if (nl == text.size()) break;
  }
  if (dims.empty()) throw std::invalid_argument("grid config has no dimensions");
  return ActionGrid(std::move(dims));
}

ActionGrid LoadGridConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseGridConfig(buf.str());
}

std::string FormatGridConfig(const ActionGrid& grid) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const DimensionSpec& d : grid.dims()) {
    out << d.name << " = " << d.lower << ", " << d.upper << ", " << d.count
        << "\n";
  }
  return out.str();
}

}  // namespace prefgain
