#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

// Insertion-ordered JSON document builder for the CLI reports. Numbers are
// serialized with 17 significant digits so reading a report back reproduces
// every double bit-for-bit; NaN and infinities (which JSON cannot carry)
// become null.

namespace report {

class Json {
 public:
  static Json object() { return Json(Kind::Object); }
  static Json array() { return Json(Kind::Array); }
  static Json null() { return Json(Kind::Null); }
  static Json number(double v) {
    Json j(Kind::Number);
    j.num_ = v;
    return j;
  }
  static Json integer(std::int64_t v) {
    Json j(Kind::Integer);
    j.int_ = v;
    return j;
  }
  static Json boolean(bool v) {
    Json j(Kind::Bool);
    j.bool_ = v;
    return j;
  }
  static Json text(std::string v) {
    Json j(Kind::Text);
    j.text_ = std::move(v);
    return j;
  }

  Json& set(const std::string& key, Json v) {
    members_.emplace_back(key, std::move(v));
    return *this;
  }
  Json& set(const std::string& key, double v) { return set(key, number(v)); }
  Json& set(const std::string& key, int v) { return set(key, integer(v)); }
  Json& set(const std::string& key, std::int64_t v) { return set(key, integer(v)); }
  Json& set(const std::string& key, bool v) { return set(key, boolean(v)); }
  Json& set(const std::string& key, const char* v) { return set(key, text(v)); }
  Json& set(const std::string& key, const std::string& v) { return set(key, text(v)); }

  Json& push(Json v) {
    members_.emplace_back(std::string(), std::move(v));
    return *this;
  }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
  }

 private:
  enum class Kind { Object, Array, Null, Number, Integer, Bool, Text };

  explicit Json(Kind k) : kind_(k) {}

  static void escape_to(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
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
    out += '"';
  }

  void write(std::string& out, int indent, int depth) const {
    const std::string pad(size_t(indent) * size_t(depth + 1), ' ');
    const std::string close_pad(size_t(indent) * size_t(depth), ' ');
    switch (kind_) {
      case Kind::Null:
        out += "null";
        break;
      case Kind::Bool:
        out += bool_ ? "true" : "false";
        break;
      case Kind::Integer: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(int_));
        out += buf;
        break;
      }
      case Kind::Number: {
        if (!std::isfinite(num_)) {
          out += "null";
          break;
        }
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", num_);
        out += buf;
        break;
      }
      case Kind::Text:
        escape_to(out, text_);
        break;
      case Kind::Object: {
        if (members_.empty()) {
          out += "{}";
          break;
        }
        out += "{\n";
        for (size_t k = 0; k < members_.size(); ++k) {
          out += pad;
          escape_to(out, members_[k].first);
          out += ": ";
          members_[k].second.write(out, indent, depth + 1);
          if (k + 1 < members_.size()) out += ',';
          out += '\n';
        }
        out += close_pad + "}";
        break;
      }
      case Kind::Array: {
        if (members_.empty()) {
          out += "[]";
          break;
        }
        out += "[\n";
        for (size_t k = 0; k < members_.size(); ++k) {
          out += pad;
          members_[k].second.write(out, indent, depth + 1);
          if (k + 1 < members_.size()) out += ',';
          out += '\n';
        }
        out += close_pad + "]";
        break;
      }
    }
  }

  Kind kind_ = Kind::Null;
  double num_ = 0.0;
  std::int64_t int_ = 0;
  bool bool_ = false;
  std::string text_;
  std::vector<std::pair<std::string, Json>> members_;
};

}  // namespace report
