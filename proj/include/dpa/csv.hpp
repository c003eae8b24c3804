#pragma once

// Minimal CSV writer. Rows are assembled in memory so the FNV-1a checksum of
// the exact bytes written can be reported. Doubles use the shortest
// round-trip representation.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <type_traits>

#include "dpa/errors.hpp"

namespace dpa {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header) {
    bool first = true;
    for (auto h : header) {
      if (!first) buf_ += ',';
      buf_ += h;
      first = false;
    }
    buf_ += '\n';
  }

  template <class... T>
  void row(const T&... fields) {
    bool first = true;
    ((put(fields, first)), ...);
    buf_ += '\n';
    ++rows_;
  }

  std::uint64_t rows() const { return rows_; }
  const std::string& text() const { return buf_; }
  std::uint64_t checksum() const { return fnv1a64(buf_); }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file \"" + path + "\"");
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out) throw ConfigError("failed writing \"" + path + "\"");
  }

  /// "wrote <path>: <rows> rows, fnv1a64 <hex>"
  std::string summary(const std::string& path) const {
    return "wrote " + path + ": " + std::to_string(rows_) + " rows, fnv1a64 " + hex64(checksum());
  }

 private:
  template <class T>
  void put(const T& v, bool& first) {
    if (!first) buf_ += ',';
    first = false;
    if constexpr (std::is_convertible_v<T, std::string_view>) {
      buf_ += std::string_view(v);
    } else {
      char tmp[64];
      auto [end, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
      buf_.append(tmp, end);
    }
  }

  std::string buf_;
  std::uint64_t rows_ = 0;
};

}  // namespace dpa
