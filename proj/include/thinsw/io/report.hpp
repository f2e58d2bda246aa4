#pragma once

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "thinsw/errors.hpp"

#ifndef THINSW_VERSION
#define THINSW_VERSION "0.0.0"
#endif

namespace thinsw {

/// Shortest round-trip decimal form; "nan"/"inf" spelled out.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  template <class... Cells>
  void row(const Cells&... cells) {
    std::vector<std::string> r;
    (r.push_back(cell(cells)), ...);
    require(r.size() == header_.size(), ErrorKind::Validation, "csv row width differs from header");
    rows_.push_back(std::move(r));
  }
  void row(std::vector<std::string> r) {
    require(r.size() == header_.size(), ErrorKind::Validation, "csv row width differs from header");
    rows_.push_back(std::move(r));
  }

  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        out += r[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::Io, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes every report file of a run and lists them, with checksums, in manifest.json.
class Emitter {
 public:
  struct Entry {
    std::string name, sha256;
    std::size_t bytes = 0;
  };

  explicit Emitter(std::filesystem::path dir) : dir_(std::move(dir)), started_(utc_timestamp()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
      throw Error(ErrorKind::Io, "cannot create output directory '" + dir_.string() + "'");
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << content;
    out.close();
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    for (auto& e : entries_)
      if (e.name == name) {
        e = {name, sha256_hex(content), content.size()};
        return;
      }
    entries_.push_back({name, sha256_hex(content), content.size()});
  }
  void write_csv(const std::string& name, const CsvTable& t) { write(name, t.str()); }
  void write_json(const std::string& name, const nlohmann::ordered_json& j) { write(name, j.dump(2) + "\n"); }

  /// Timestamps live only in the manifest so that report files stay byte-identical across reruns.
  void finish(const nlohmann::ordered_json& config, const std::string& subcommand) {
    nlohmann::ordered_json m;
    m["subcommand"] = subcommand;
    m["code_version"] = THINSW_VERSION;
    m["config_sha256"] = sha256_hex(config.dump());
    m["started"] = started_;
    m["finished"] = utc_timestamp();
    m["files"] = nlohmann::ordered_json::array();
    for (const auto& e : entries_) m["files"].push_back({{"path", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
    const std::string text = m.dump(2) + "\n";
    std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error(ErrorKind::Io, "cannot write manifest");
  }

  const std::vector<Entry>& entries() const { return entries_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::string started_;
  std::vector<Entry> entries_;
};

}  // namespace thinsw
