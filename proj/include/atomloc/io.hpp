#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "atomloc/common.hpp"
#include "atomloc/config.hpp"
#include "atomloc/version.hpp"

namespace atomloc {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
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

/// Shortest decimal form that round-trips a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Checksum of a text file's contents with every "# generated" line removed,
/// so regenerated files with fresh timestamps keep a stable hash.
inline std::uint64_t content_checksum(std::string_view text) {
  std::string kept;
  kept.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size() - 1;
    const auto line = text.substr(pos, eol - pos + 1);
    if (line.rfind("# generated", 0) != 0) kept.append(line);
    pos = eol + 1;
  }
  return fnv1a64(kept);
}

struct RunStamp {
  std::string convention;
  std::uint64_t config_hash = 0;

  RunStamp() = default;
  RunStamp(const RunConfig& rc, Convention conv)
      : convention(convention_name(conv)),
        config_hash(fnv1a64(resolved_config(rc).dump())) {}

  std::string metadata_line() const {
    return "# atomloc " + std::string(version) + " convention=" + convention +
           " config=" + hex64(config_hash) + "\n";
  }
};

/// CSV with a stable metadata line and a timestamp line (only the latter is
/// ignored by content_checksum). Cells are pre-formatted strings.
class CsvBuilder {
 public:
  CsvBuilder(const RunStamp& stamp, const std::vector<std::string>& columns) {
    text_ = stamp.metadata_line();
    text_ += "# generated " + utc_timestamp() + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) text_ += ',';
      text_ += columns[i];
    }
    text_ += '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }

  void numeric_row(const std::vector<double>& vals) {
    std::vector<std::string> cells;
    cells.reserve(vals.size());
    for (double v : vals) cells.push_back(format_double(v));
    row(cells);
  }

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file \"" + path.string() + "\"");
  out.write(text.data(), std::streamsize(text.size()));
  if (!out) throw config_error("short write to \"" + path.string() + "\"");
}

/// Tracks the files a command emits and renders the run manifest.
class OutputSet {
 public:
  OutputSet(std::filesystem::path dir, std::string command, const RunConfig& rc, Convention conv)
      : dir_(std::move(dir)), command_(std::move(command)), stamp_(rc, conv), config_(resolved_config(rc)) {
    std::filesystem::create_directories(dir_);
  }

  const RunStamp& stamp() const { return stamp_; }
  const std::filesystem::path& dir() const { return dir_; }

  void add_text(const std::string& name, std::string_view text) {
    write_text_file(dir_ / name, text);
    files_.push_back({name, content_checksum(text)});
  }

  void add_csv(const std::string& name, const CsvBuilder& csv) { add_text(name, csv.text()); }

  void set_seed(std::uint64_t seed) {
    seed_ = seed;
    has_seed_ = true;
  }

  /// Writes manifest.json and returns its path.
  std::filesystem::path finish() {
    nlohmann::json m;
    m["tool"] = "atomloc";
    m["version"] = version;
    m["command"] = command_;
    m["convention"] = stamp_.convention;
    m["config"] = config_;
    m["config_hash"] = hex64(stamp_.config_hash);
    if (has_seed_) m["seed"] = seed_;
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& [name, sum] : files_) outs.push_back({{"file", name}, {"fnv1a64", hex64(sum)}});
    m["outputs"] = outs;
    m["generated"] = utc_timestamp();
    const auto path = dir_ / "manifest.json";
    write_text_file(path, m.dump(2) + "\n");
    return path;
  }

 private:
  std::filesystem::path dir_;
  std::string command_;
  RunStamp stamp_;
  nlohmann::json config_;
  std::vector<std::pair<std::string, std::uint64_t>> files_;
  std::uint64_t seed_ = 0;
  bool has_seed_ = false;
};

}  // namespace atomloc
