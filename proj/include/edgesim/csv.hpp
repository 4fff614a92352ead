// Copyright 2026 The Edgesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDGESIM_CSV_HPP
#define EDGESIM_CSV_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "edgesim/errors.hpp"

namespace edgesim {

// Numbers are rendered with std::to_chars (shortest round-trip form), so
// emitted CSVs are byte-stable across runs and reload to the same doubles.

inline void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

inline void append_number(std::string& out, std::int64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IoError(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
  }
  return v;
}

inline std::int64_t parse_int(std::string_view s, const char* what) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IoError(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
  }
  return v;
}

/// Splits one CSV line on commas (no quoting; none of our formats needs it).
inline void split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

/// Buffered line-oriented writer on top of stdio.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : path_(path) {
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw IoError("cannot open '" + path + "' for writing");
    buffer_.reserve(kFlushAt + 4096);
  }

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter(CsvWriter&& other) noexcept
      : path_(std::move(other.path_)),
        file_(other.file_),
        buffer_(std::move(other.buffer_)) {
    other.file_ = nullptr;
    other.buffer_.clear();
  }

  ~CsvWriter() {
    try {
      close();
    } catch (...) {
    }
  }

  std::string& line() { return buffer_; }

  void end_line() {
    buffer_.push_back('\n');
    if (buffer_.size() >= kFlushAt) flush();
  }

  void write_raw(std::string_view s) {
    buffer_.append(s);
    if (buffer_.size() >= kFlushAt) flush();
  }

  void flush() {
    if (!file_ || buffer_.empty()) return;
    if (std::fwrite(buffer_.data(), 1, buffer_.size(), file_) != buffer_.size()) {
      throw IoError("short write to '" + path_ + "'");
    }
    buffer_.clear();
  }

  void close() {
    if (!file_) return;
    flush();
    if (std::fclose(file_) != 0) {
      file_ = nullptr;
      throw IoError("error closing '" + path_ + "'");
    }
    file_ = nullptr;
  }

 private:
  static constexpr std::size_t kFlushAt = 1 << 20;
  std::string path_;
  std::FILE* file_ = nullptr;
  std::string buffer_;
};

/// Buffered line reader. Lines are valid until the next next_line() call.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path) : path_(path) {
    file_ = std::fopen(path.c_str(), "rb");
    if (!file_) throw IoError("cannot open '" + path + "' for reading");
  }

  CsvReader(const CsvReader&) = delete;
  CsvReader& operator=(const CsvReader&) = delete;

  CsvReader(CsvReader&& other) noexcept
      : path_(std::move(other.path_)),
        file_(other.file_),
        line_(std::move(other.line_)),
        line_number_(other.line_number_) {
    other.file_ = nullptr;
  }

  ~CsvReader() {
    if (file_) std::fclose(file_);
  }

  const std::string& path() const { return path_; }
  std::size_t line_number() const { return line_number_; }

  /// Returns false at EOF. Strips trailing \r\n / \n.
  bool next_line(std::string_view& out) {
    line_.clear();
    int ch;
    bool any = false;
    while ((ch = std::getc(file_)) != EOF) {
      any = true;
      if (ch == '\n') break;
      line_.push_back(static_cast<char>(ch));
    }
    if (!any) return false;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    ++line_number_;
    out = line_;
    return true;
  }

 private:
  std::string path_;
  std::FILE* file_ = nullptr;
  std::string line_;
  std::size_t line_number_ = 0;
};

}  // namespace edgesim

#endif  // EDGESIM_CSV_HPP
