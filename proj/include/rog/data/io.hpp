// Copyright 2026 The RoG Authors
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

// Feature-set interchange formats.
//
// CSV: one sample per line, d comma-separated decimals followed by an integer
// label. An optional first line "#d=<d>,C=<C>" pins the dimension and class
// count; without it C is inferred as max(2, max label + 1).
//
// rogf (little-endian throughout):
//   "ROGF" | u32 version=1 | u64 N | u64 d | u64 C |
//   N*d f32 features, row-major | N u32 labels
// A corruption mask lives next to it as N bytes of 0/1 (see mask_path_for).

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rog/data/feature_set.hpp"
#include "rog/error.hpp"

namespace rog {

enum class FileFormat { kCsv, kRogf };

inline constexpr std::array<char, 4> kRogfMagic{'R', 'O', 'G', 'F'};
inline constexpr std::uint32_t kRogfVersion = 1;

/// Format from the file extension: ".csv" is CSV, anything else rogf.
inline FileFormat format_for(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".csv" ? FileFormat::kCsv : FileFormat::kRogf;
}

inline std::filesystem::path mask_path_for(const std::filesystem::path& rogf_path) {
  auto p = rogf_path;
  p.replace_extension(".mask");
  return p;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no) {
  T value{};
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(token) + "'");
  }
  return value;
}

template <typename T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_unsigned_v<T>);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  os.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

inline std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace detail

inline FeatureSet parse_csv(std::string_view text) {
  std::optional<Eigen::Index> declared_dim;
  std::optional<int> declared_classes;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    auto line = detail::trim(text.substr(pos, end == std::string_view::npos ? end : end - pos));
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!rows.empty() || declared_dim) throw ParseError("header must be the first line");
      for (auto field : detail::split_commas(line.substr(1))) {
        auto eq = field.find('=');
        if (eq == std::string_view::npos) throw ParseError("malformed header field '" + std::string(field) + "'");
        auto key = detail::trim(field.substr(0, eq));
        auto val = detail::trim(field.substr(eq + 1));
        if (key == "d") {
          declared_dim = detail::parse_number<long>(val, line_no);
        } else if (key == "C") {
          declared_classes = detail::parse_number<int>(val, line_no);
        } else {
          throw ParseError("unknown header key '" + std::string(key) + "'");
        }
      }
      if (!declared_dim || !declared_classes) throw ParseError("header needs both d and C");
      continue;
    }
    auto tokens = detail::split_commas(line);
    if (tokens.size() < 2) throw DimensionError("line " + std::to_string(line_no) + ": need features and a label");
    std::vector<double> row;
    row.reserve(tokens.size() - 1);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) row.push_back(detail::parse_number<double>(tokens[i], line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DimensionError("line " + std::to_string(line_no) + ": ragged row (" + std::to_string(row.size()) +
                           " features, expected " + std::to_string(rows.front().size()) + ")");
    }
    if (declared_dim && static_cast<Eigen::Index>(row.size()) != *declared_dim) {
      throw DimensionError("line " + std::to_string(line_no) + ": header declares d=" +
                           std::to_string(*declared_dim));
    }
    labels.push_back(detail::parse_number<int>(tokens.back(), line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows");
  Matrix features(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  int classes = declared_classes.value_or(std::max(2, *std::max_element(labels.begin(), labels.end()) + 1));
  return FeatureSet(std::move(features), std::move(labels), classes);
}

inline std::string to_csv(const FeatureSet& ds) {
  std::ostringstream os;
  os << "#d=" << ds.dim() << ",C=" << ds.num_classes() << '\n';
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    for (Eigen::Index j = 0; j < ds.dim(); ++j) os << detail::format_double(ds.features()(i, j)) << ',';
    os << ds.label(i) << '\n';
  }
  return os.str();
}

inline FeatureSet parse_rogf(std::span<const unsigned char> bytes) {
  constexpr std::size_t kHeader = 4 + 4 + 8 * 3;
  if (bytes.size() < kHeader) throw ParseError("rogf: truncated header");
  if (std::memcmp(bytes.data(), kRogfMagic.data(), 4) != 0) throw ParseError("rogf: bad magic");
  const auto* p = bytes.data() + 4;
  auto version = detail::get_le<std::uint32_t>(p);
  if (version != kRogfVersion) throw ParseError("rogf: unsupported version " + std::to_string(version));
  auto n = detail::get_le<std::uint64_t>(p + 4);
  auto d = detail::get_le<std::uint64_t>(p + 12);
  auto c = detail::get_le<std::uint64_t>(p + 20);
  if (n == 0 || d == 0) throw DimensionError("rogf: N and d must be positive");
  if (c < 2 || c > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw ValidationError("rogf: class count out of range");
  }
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / 8;
  if (n > limit / d) throw ParseError("rogf: N*d overflows");
  const std::uint64_t expected = kHeader + n * d * 4 + n * 4;
  if (bytes.size() != expected) {
    throw ParseError("rogf: expected " + std::to_string(expected) + " bytes, found " + std::to_string(bytes.size()));
  }
  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const auto* fp = bytes.data() + kHeader;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < d; ++j, fp += 4) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(std::bit_cast<float>(detail::get_le<std::uint32_t>(fp)));
    }
  }
  std::vector<int> labels(n);
  for (std::uint64_t i = 0; i < n; ++i, fp += 4) {
    auto y = detail::get_le<std::uint32_t>(fp);
    if (y >= c) throw ValidationError("rogf: label " + std::to_string(y) + " >= C=" + std::to_string(c));
    labels[i] = static_cast<int>(y);
  }
  return FeatureSet(std::move(features), std::move(labels), static_cast<int>(c));
}

/// rogf bytes. Features are narrowed to f32.
inline std::string to_rogf(const FeatureSet& ds) {
  std::ostringstream os(std::ios::binary);
  os.write(kRogfMagic.data(), 4);
  detail::put_le<std::uint32_t>(os, kRogfVersion);
  detail::put_le<std::uint64_t>(os, static_cast<std::uint64_t>(ds.size()));
  detail::put_le<std::uint64_t>(os, static_cast<std::uint64_t>(ds.dim()));
  detail::put_le<std::uint64_t>(os, static_cast<std::uint64_t>(ds.num_classes()));
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      detail::put_le<std::uint32_t>(os, std::bit_cast<std::uint32_t>(static_cast<float>(ds.features()(i, j))));
    }
  }
  for (int y : ds.labels()) detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(y));
  return os.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError("write failed for " + path.string());
}

inline FeatureSet load_feature_set(const std::filesystem::path& path, FileFormat format) {
  auto bytes = detail::read_all(path);
  if (format == FileFormat::kCsv) {
    return parse_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
  return parse_rogf(bytes);
}

inline FeatureSet load_feature_set(const std::filesystem::path& path) {
  return load_feature_set(path, format_for(path));
}

inline void save_feature_set(const FeatureSet& ds, const std::filesystem::path& path, FileFormat format) {
  write_file(path, format == FileFormat::kCsv ? to_csv(ds) : to_rogf(ds));
}

inline void save_feature_set(const FeatureSet& ds, const std::filesystem::path& path) {
  save_feature_set(ds, path, format_for(path));
}

inline void save_mask(const std::vector<bool>& mask, const std::filesystem::path& path) {
  std::string bytes(mask.size(), '\0');
  for (std::size_t i = 0; i < mask.size(); ++i) bytes[i] = mask[i] ? '\1' : '\0';
  write_file(path, bytes);
}

inline std::vector<bool> load_mask(const std::filesystem::path& path, std::optional<std::size_t> expected_size = {}) {
  auto bytes = detail::read_all(path);
  if (expected_size && bytes.size() != *expected_size) {
    throw DimensionError("mask " + path.string() + " has " + std::to_string(bytes.size()) + " entries, expected " +
                         std::to_string(*expected_size));
  }
  std::vector<bool> mask(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] > 1) throw ParseError("mask byte at " + std::to_string(i) + " is not 0/1");
    mask[i] = bytes[i] == 1;
  }
  return mask;
}

}  // namespace rog
