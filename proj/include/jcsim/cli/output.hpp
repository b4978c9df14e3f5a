// Copyright 2026 The jcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV tables, content digests and the run manifest.

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "jcsim/cli/config.hpp"

namespace jcsim::cli {

struct CsvTable {
  std::string file;  // relative to the output directory
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row) {
    if (row.size() != header.size()) throw InvalidArgument(file + ": row width does not match header");
    rows.push_back(std::move(row));
  }

  /// Comma separated, 17 significant digits, '\n' line ends.
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_real(row[i]);
      }
      out += '\n';
    }
    return out;
  }
};

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

struct OutputRecord {
  std::string file;
  std::uint64_t digest;
  std::size_t bytes;
};

struct Manifest {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<OutputRecord> outputs;

  void set(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }

  std::string to_string() const {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      const std::string p = "output." + std::to_string(i) + ".";
      out += p + "file = " + outputs[i].file + "\n";
      out += p + "fnv1a64 = " + hex64(outputs[i].digest) + "\n";
      out += p + "bytes = " + std::to_string(outputs[i].bytes) + "\n";
    }
    return out;
  }
};

/// Writes every table plus `resolved_config.txt`; returns their records.
inline std::vector<OutputRecord> write_outputs(const std::filesystem::path& dir, const std::vector<CsvTable>& tables,
                                               const Config& config) {
  std::filesystem::create_directories(dir);
  std::vector<OutputRecord> records;
  auto emit = [&](const std::string& name, const std::string& bytes) {
    write_file(dir / name, bytes);
    records.push_back({name, fnv1a64(bytes), bytes.size()});
  };
  for (const auto& t : tables) emit(t.file, t.to_string());
  emit("resolved_config.txt", config.to_text());
  return records;
}

}  // namespace jcsim::cli
