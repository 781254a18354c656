#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "auctok/errors.hpp"
#include "auctok/version.hpp"

namespace auctok {

enum class ArtifactFormat { csv, json };

// Round-trip-safe text form of a double (17 significant digits).
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// FNV-1a over the canonical (key-sorted) dump of the config, so the same
// logical config always stamps the same hash into its artifacts.
inline std::string config_hash(const nlohmann::json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

inline std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ArtifactMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
};

using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

inline std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::int64_t>(c))
    return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<std::uint64_t>(c))
    return std::to_string(std::get<std::uint64_t>(c));
  return std::get<std::string>(c);
}

// Row-streaming artifact writer (both formats stream, so million-row
// traces never sit in memory). The header carries provenance; the
// timestamp has its own line/field so the body below it is byte-stable
// for a fixed config and seed.
class ArtifactWriter {
 public:
  ArtifactWriter(const std::filesystem::path& path, ArtifactFormat format,
                 const ArtifactMeta& meta, std::vector<std::string> columns)
      : format_(format), columns_(std::move(columns)), path_(path.string()) {
    if (path.has_parent_path()) {
      std::filesystem::create_directories(path.parent_path());
    }
    out_.open(path);
    if (!out_) fail_domain("cannot open output file: " + path.string());
    if (format_ == ArtifactFormat::csv) {
      out_ << "# generated_at=" << timestamp_utc() << "\n";
      out_ << "# config_hash=" << meta.config_hash << " seed=" << meta.seed
           << " version=" << AUCTOK_VERSION << "\n";
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        out_ << (i ? "," : "") << columns_[i];
      }
      out_ << "\n";
    } else {
      const nlohmann::json header = {{"generated_at", timestamp_utc()},
                                     {"config_hash", meta.config_hash},
                                     {"seed", meta.seed},
                                     {"version", AUCTOK_VERSION}};
      out_ << "{\n\"meta\": " << header.dump() << ",\n\"rows\": [";
    }
  }

  void row(const std::vector<Cell>& cells) {
    require(cells.size() == columns_.size(), "ArtifactWriter: column mismatch");
    if (format_ == ArtifactFormat::csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << (i ? "," : "") << cell_text(cells[i]);
      }
      out_ << "\n";
    } else {
      nlohmann::json r = nlohmann::json::object();
      for (std::size_t i = 0; i < cells.size(); ++i) {
        std::visit([&](const auto& v) { r[columns_[i]] = v; }, cells[i]);
      }
      out_ << (rows_written_ ? ",\n" : "\n") << r.dump();
      ++rows_written_;
    }
  }

  void close() {
    if (closed_) return;
    if (format_ == ArtifactFormat::json) {
      out_ << "\n]}\n";
    }
    out_.close();
    closed_ = true;
  }

  const std::string& path() const { return path_; }

  ~ArtifactWriter() { close(); }

 private:
  ArtifactFormat format_;
  std::vector<std::string> columns_;
  std::string path_;
  std::ofstream out_;
  std::uint64_t rows_written_ = 0;
  bool closed_ = false;
};

inline const char* artifact_extension(ArtifactFormat f) {
  return f == ArtifactFormat::csv ? ".csv" : ".json";
}

}  // namespace auctok
