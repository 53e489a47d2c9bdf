// Copyright 2026 The sockopt Authors
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
//
// Small file/CSV utilities shared by the modules and the CLI. All output
// files are written atomically (temp file + rename) so a cancelled command
// never leaves a partial artifact behind.

#ifndef SOCKOPT_IO_HPP_
#define SOCKOPT_IO_HPP_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sockopt/errors.hpp"
#include "sockopt/rng.hpp"

namespace sockopt {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void atomic_write_text(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + tmp.string());
    out << content;
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string fnv1a64_hex(const std::string& bytes) {
  const std::uint64_t h = detail::fnv1a64(bytes);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

// Fixed-point formatting used for CSV cells; the fixed formatting (not the
// locale, not ostream state) is what keeps reruns byte-identical.
inline std::string fmt_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  return std::string(buf);
}

// Shortest representation that round-trips a double.
inline std::string fmt_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

inline std::vector<std::string> split_on(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Line-oriented CSV cursor that reports the file name and 1-based line
// number in every error it raises.
class CsvCursor {
 public:
  CsvCursor(std::string name, const std::string& content)
      : name_(std::move(name)), stream_(content) {}

  bool next_line(std::string* line) {
    while (std::getline(stream_, *line)) {
      ++line_no_;
      if (!line->empty() && line->back() == '\r') line->pop_back();
      return true;
    }
    return false;
  }

  int line_number() const { return line_no_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError(name_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

  double parse_double(const std::string& field) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(field, &pos);
      if (pos != field.size()) fail("malformed number '" + field + "'");
      return v;
    } catch (const DataError&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed number '" + field + "'");
    }
  }

  long long parse_int(const std::string& field) const {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(field, &pos);
      if (pos != field.size()) fail("malformed integer '" + field + "'");
      return v;
    } catch (const DataError&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed integer '" + field + "'");
    }
  }

 private:
  std::string name_;
  std::istringstream stream_;
  int line_no_ = 0;
};

}  // namespace sockopt

#endif  // SOCKOPT_IO_HPP_
