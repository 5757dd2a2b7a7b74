#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace upwind {

/// Shortest round-trip decimal form of a double (deterministic output).
inline std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lg", &back);
    if (back == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// FNV-1a over the canonical config text.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// CSV writer: one comment line with the full resolved config and its hash,
/// then a header row, then data rows.  Output is byte-identical across runs
/// of the same config.  The file is written to a temporary name and renamed
/// on close, so readers never observe a partial file.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& config_echo,
            const std::vector<std::string>& columns)
      : path_(path), tmp_(path + ".tmp"), out_(tmp_) {
    if (!out_) throw std::runtime_error("cannot open output file: " + tmp_);
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(config_echo)));
    out_ << "# config " << config_echo << " hash=" << hash << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }

  ~CsvWriter() {
    out_.close();
    std::rename(tmp_.c_str(), path_.c_str());
  }

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
      out_ << fmt_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
  }

  void row_raw(const std::string& line) { out_ << line << "\n"; }

 private:
  std::string path_, tmp_;
  std::ofstream out_;
};

}  // namespace upwind
