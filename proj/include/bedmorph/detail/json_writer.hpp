#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "bedmorph/errors.hpp"

// Deterministic JSON emission for report files. Every floating-point value is
// written with 17 significant digits so byte-identical reruns are checkable;
// non-finite values become null. Parsing stays with nlohmann/json; this
// writer only covers the output path.

namespace bedmorph::detail {

inline std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

/// Stream-style writer; the caller is responsible for well-formed nesting.
class JsonWriter {
 public:
  std::string str() const { return text_; }

  JsonWriter& begin_object() { open("{"); return *this; }
  JsonWriter& end_object() { close("}"); return *this; }
  JsonWriter& begin_array() { open("["); return *this; }
  JsonWriter& end_array() { close("]"); return *this; }

  JsonWriter& key(const std::string& name) {
    separate();
    text_ += '"' + json_escape(name) + "\":";
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double v) { return raw(json_number(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(long v) { return raw(std::to_string(v)); }
  JsonWriter& value(long long v) { return raw(std::to_string(v)); }
  JsonWriter& value(unsigned v) { return raw(std::to_string(v)); }
  JsonWriter& value(unsigned long v) { return raw(std::to_string(v)); }
  JsonWriter& value(unsigned long long v) { return raw(std::to_string(v)); }
  JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
  JsonWriter& value(const std::string& v) { return raw('"' + json_escape(v) + '"'); }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& null() { return raw("null"); }

  template <typename T>
  JsonWriter& kv(const std::string& name, const T& v) {
    key(name);
    return value(v);
  }

 private:
  void open(const char* brace) {
    separate();
    text_ += brace;
    first_.push_back(true);
    pending_value_ = false;
  }

  void close(const char* brace) {
    text_ += brace;
    first_.pop_back();
  }

  JsonWriter& raw(const std::string& token) {
    separate();
    text_ += token;
    pending_value_ = false;
    return *this;
  }

  void separate() {
    if (pending_value_) return;  // value directly after a key
    if (!first_.empty()) {
      if (!first_.back()) text_ += ',';
      first_.back() = false;
    }
  }

  std::string text_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::InputNotFound, "cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) raise(ErrorCode::CorruptPayload, "short write to " + path);
}

}  // namespace bedmorph::detail
