#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "specband/errors.hpp"

namespace specband {

// Deterministic float formatting shared by every CSV writer, so identical
// values always serialize to identical bytes.
inline std::string format_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// Full round-trip precision; used where values are read back (graph weights).
inline std::string format_double_exact(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Write-then-rename so readers never observe a partially written file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);  // best effort; open reports failure
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw DataError("rename failed for " + path.string() + ": " + ec.message());
}

// Line-oriented "key=value" manifest.
inline void write_manifest(const std::vector<std::pair<std::string, std::string>>& entries,
                           const std::filesystem::path& path) {
  std::string s;
  for (const auto& [k, v] : entries) {
    s += k;
    s += '=';
    s += v;
    s += '\n';
  }
  atomic_write_text(path, s);
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace specband
