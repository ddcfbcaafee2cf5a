// Copyright 2026 The Authors.
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


// On-disk formats.
//
//   <name>.csv   field values, one grid row per line, columns separated by ','
//                with no header; numbers use 17 significant digits so values
//                survive a write/read cycle bit for bit.
//   <name>.meta  flat key=value sidecar with grid and model parameters.

#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "markov_ipp/errors.hpp"
#include "markov_ipp/gp.hpp"
#include "markov_ipp/transect.hpp"

namespace markov_ipp::io {

/// 17 significant digits, enough to round-trip every finite double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view s, std::string_view what) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::kParseError,
                "bad number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

inline long long parse_int(std::string_view s, std::string_view what) {
  const double v = parse_double(s, what);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw Error(ErrorCode::kParseError, "expected integer in " + std::string(what));
  }
  return static_cast<long long>(v);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Field CSV

inline std::string field_to_csv(const Eigen::MatrixXd& field) {
  std::string out;
  for (Eigen::Index r = 0; r < field.rows(); ++r) {
    for (Eigen::Index c = 0; c < field.cols(); ++c) {
      if (c) out += ',';
      out += format_double(field(r, c));
    }
    out += '\n';
  }
  return out;
}

inline Eigen::MatrixXd field_from_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  for (const auto& line : split(text, '\n')) {
    std::string_view l = line;
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (l.find_first_not_of(" \t") == std::string_view::npos) continue;
    std::vector<double> row;
    for (const auto& cell : split(l, ',')) row.push_back(parse_double(cell, "field CSV"));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::kParseError, "ragged field CSV");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kParseError, "empty field CSV");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// key=value files

using KeyValues = std::map<std::string, std::string>;

inline KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  for (const auto& raw : split(text, '\n')) {
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "expected key=value, got '" + std::string(line) + "'");
    }
    auto trim = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

struct FieldMetadata {
  int n_rows = 0;
  int n_cols = 0;
  double omega1 = 1.0;
  double omega2 = 1.0;
  Hyperparams hyper;
  double prior_mean = 0.0;
  std::optional<std::uint64_t> seed;
};

inline std::string metadata_to_text(const FieldMetadata& m) {
  std::string s;
  auto put = [&s](const char* key, const std::string& value) {
    s += key;
    s += '=';
    s += value;
    s += '\n';
  };
  put("rows", std::to_string(m.n_rows));
  put("cols", std::to_string(m.n_cols));
  put("omega1", format_double(m.omega1));
  put("omega2", format_double(m.omega2));
  put("ell1", format_double(m.hyper.ell1));
  put("ell2", format_double(m.hyper.ell2));
  put("signal_var", format_double(m.hyper.signal_var));
  put("noise_var", format_double(m.hyper.noise_var));
  put("prior_mean", format_double(m.prior_mean));
  if (m.seed) put("seed", std::to_string(*m.seed));
  return s;
}

inline FieldMetadata metadata_from_text(std::string_view text) {
  const KeyValues kv = parse_key_values(text);
  auto need = [&kv](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw Error(ErrorCode::kParseError, std::string("sidecar is missing '") + key + "'");
    }
    return it->second;
  };
  FieldMetadata m;
  m.n_rows = static_cast<int>(parse_int(need("rows"), "rows"));
  m.n_cols = static_cast<int>(parse_int(need("cols"), "cols"));
  m.omega1 = parse_double(need("omega1"), "omega1");
  m.omega2 = parse_double(need("omega2"), "omega2");
  m.hyper.ell1 = parse_double(need("ell1"), "ell1");
  m.hyper.ell2 = parse_double(need("ell2"), "ell2");
  m.hyper.signal_var = parse_double(need("signal_var"), "signal_var");
  m.hyper.noise_var = parse_double(need("noise_var"), "noise_var");
  m.prior_mean = parse_double(need("prior_mean"), "prior_mean");
  if (auto it = kv.find("seed"); it != kv.end()) {
    m.seed = static_cast<std::uint64_t>(std::stoull(it->second));
  }
  return m;
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& field_path) {
  std::filesystem::path p = field_path;
  p.replace_extension(".meta");
  return p;
}

/// Writes the CSV and its sidecar; returns the checksum of the CSV bytes.
inline std::string write_field(const std::filesystem::path& path,
                               const Eigen::MatrixXd& field, const FieldMetadata& meta) {
  const std::string csv = field_to_csv(field);
  write_text(path, csv);
  write_text(sidecar_path(path), metadata_to_text(meta));
  return fnv1a_hex(csv);
}

struct LoadedField {
  TransectGrid grid;
  std::optional<FieldMetadata> meta;  // absent when no sidecar exists
};

/// Reads a field CSV and, if present, its sidecar. Grid widths come from the
/// sidecar; without one they default to 1 and callers are expected to supply
/// them.
inline LoadedField load_field(const std::filesystem::path& path) {
  LoadedField out;
  const Eigen::MatrixXd values = field_from_csv(read_text(path));
  out.grid.n_rows = static_cast<int>(values.rows());
  out.grid.n_cols = static_cast<int>(values.cols());
  out.grid.measurements = values;
  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    out.meta = metadata_from_text(read_text(side));
    if (out.meta->n_rows != out.grid.n_rows || out.meta->n_cols != out.grid.n_cols) {
      throw Error(ErrorCode::kParseError, "sidecar shape disagrees with the CSV");
    }
    out.grid.omega1 = out.meta->omega1;
    out.grid.omega2 = out.meta->omega2;
  }
  return out;
}

}  // namespace markov_ipp::io
