#pragma once

// Deterministic text output. All floating point values are serialized with
// 17 significant digits so runs are byte-for-byte reproducible.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "argmle/common.hpp"

namespace argmle {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Minimal JSON emitter with fixed field order and fixed float formatting.
class JsonWriter {
 public:
  void begin_object() { put_sep(); out_ << '{'; stack_.push_back(true); }
  void end_object() { out_ << '}'; stack_.pop_back(); mark_value(); }
  void begin_array() { put_sep(); out_ << '['; stack_.push_back(true); }
  void end_array() { out_ << ']'; stack_.pop_back(); mark_value(); }

  void key(const std::string& name) {
    put_sep();
    write_string(name);
    out_ << ':';
    pending_value_ = true;
  }

  void value(double x) { put_sep(); out_ << format_double(x); mark_value(); }
  void value(std::int64_t x) { put_sep(); out_ << x; mark_value(); }
  void value(std::uint64_t x) { put_sep(); out_ << x; mark_value(); }
  void value(bool b) { put_sep(); out_ << (b ? "true" : "false"); mark_value(); }
  void value(const std::string& s) { put_sep(); write_string(s); mark_value(); }
  void value(const char* s) { value(std::string(s)); }

  void kv(const std::string& name, double x) { key(name); value(x); }
  void kv(const std::string& name, std::int64_t x) { key(name); value(x); }
  void kv(const std::string& name, std::uint64_t x) { key(name); value(x); }
  void kv(const std::string& name, bool b) { key(name); value(b); }
  void kv(const std::string& name, const std::string& s) { key(name); value(s); }

  void vector_field(const std::string& name, const Eigen::VectorXd& v) {
    key(name);
    begin_array();
    for (Eigen::Index i = 0; i < v.size(); ++i) value(v(i));
    end_array();
  }

  void matrix_field(const std::string& name, const Eigen::MatrixXd& m) {
    key(name);
    begin_array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      begin_array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) value(m(i, j));
      end_array();
    }
    end_array();
  }

  std::string str() const { return out_.str(); }

 private:
  void put_sep() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!stack_.empty() && !stack_.back()) out_ << ',';
    if (!stack_.empty()) stack_.back() = false;
  }
  void mark_value() {
    if (!stack_.empty()) stack_.back() = false;
  }
  void write_string(const std::string& s) {
    out_ << '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ << "\\\""; break;
        case '\\': out_ << "\\\\"; break;
        case '\n': out_ << "\\n"; break;
        case '\t': out_ << "\\t"; break;
        default: out_ << c;
      }
    }
    out_ << '"';
  }

  std::ostringstream out_;
  std::vector<bool> stack_;  // true = container still empty
  bool pending_value_ = false;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw validation_error("cannot open output file: " + path);
  f << content;
  if (!f) throw validation_error("failed writing output file: " + path);
}

}  // namespace argmle
