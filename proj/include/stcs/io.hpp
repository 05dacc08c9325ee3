// SPDX-License-Identifier: Apache-2.0
//
// stcs - spatio-temporal compressed sensing toolkit
// Copyright (C) 2026 The stcs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stcs/error.hpp"
#include "stcs/frame.hpp"
#include "stcs/measurement.hpp"
#include "stcs/metrics.hpp"
#include "stcs/random.hpp"
#include "stcs/synthgen.hpp"

namespace stcs::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw IoError("cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

inline std::string lookup(const Metadata& meta, std::string_view key, std::string fallback = {}) {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  return fallback;
}

// ---- frames ---------------------------------------------------------------
//
// Rows are samples, columns are channels. The first line is a comment
// header of comma-separated key=value pairs, e.g. "# M=256,L=4".

struct CsvFrame {
  MultichannelFrame frame;
  Metadata meta;
};

inline void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& values, const Metadata& meta) {
  os << "# ";
  for (std::size_t k = 0; k < meta.size(); ++k) os << (k ? "," : "") << meta[k].first << '=' << meta[k].second;
  os << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) os << (c ? "," : "") << format_double(values(r, c));
    os << '\n';
  }
}

inline Metadata frame_metadata(const MultichannelFrame& frame) {
  return {{"M", std::to_string(frame.n_samples())}, {"L", std::to_string(frame.n_channels())}};
}

inline void write_frame_csv(std::ostream& os, const MultichannelFrame& frame, const Metadata& meta) {
  write_matrix_csv(os, frame.values(), meta);
}

inline Metadata parse_header(std::string_view line) {
  Metadata meta;
  line.remove_prefix(1);  // '#'
  std::stringstream ss{std::string(line)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    meta.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return meta;
}

inline std::pair<Eigen::MatrixXd, Metadata> read_matrix_csv(std::istream& is) {
  Metadata meta;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    if (line.front() == '#') {
      auto more = parse_header(line);
      meta.insert(meta.end(), more.begin(), more.end());
      continue;
    }
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("ragged CSV: row " + std::to_string(rows.size() + 1) + " has " +
                    std::to_string(row.size()) + " columns, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("CSV contains no data rows");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return {std::move(values), std::move(meta)};
}

inline CsvFrame read_frame_csv(std::istream& is) {
  auto [values, meta] = read_matrix_csv(is);
  return {MultichannelFrame(std::move(values)), std::move(meta)};
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return is;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os.precision(17);
  return os;
}

inline void close_checked(std::ofstream& os, const std::string& path) {
  os.close();
  if (!os) throw IoError("failed writing '" + path + "'");
}

inline CsvFrame load_frame(const std::string& path) {
  auto is = open_in(path);
  try {
    return read_frame_csv(is);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline void save_frame(const std::string& path, const MultichannelFrame& frame, const Metadata& meta) {
  auto os = open_out(path);
  write_frame_csv(os, frame, meta);
  close_checked(os, path);
}

inline void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& values, const Metadata& meta) {
  auto os = open_out(path);
  write_matrix_csv(os, values, meta);
  close_checked(os, path);
}

// ---- measurement matrices -------------------------------------------------
//
// Compact form: {"n": N, "m": M, "seed": s, "rng": "...", "columns": [[r1, r2], ...]}.

inline nlohmann::json to_json(const MeasurementMatrix& phi) {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& [r0, r1] : phi.columns()) cols.push_back({r0, r1});
  return {{"n", phi.n_rows()}, {"m", phi.n_cols()}, {"seed", phi.seed()},
          {"rng", std::string(Rng::kName)}, {"columns", std::move(cols)}};
}

inline MeasurementMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<Eigen::Index>();
    const auto m = j.at("m").get<Eigen::Index>();
    const auto seed = j.at("seed").get<std::uint64_t>();
    std::vector<MeasurementMatrix::ColumnEntries> columns;
    for (const auto& c : j.at("columns")) {
      if (c.size() != 2) throw IoError("every column must list exactly two rows");
      columns.push_back({c.at(0).get<Eigen::Index>(), c.at(1).get<Eigen::Index>()});
    }
    if (static_cast<Eigen::Index>(columns.size()) != m) {
      throw IoError("matrix declares m = " + std::to_string(m) + " but lists " +
                    std::to_string(columns.size()) + " columns");
    }
    return MeasurementMatrix(n, std::move(columns), seed);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed measurement matrix JSON: ") + e.what());
  }
}

inline void save_matrix(const std::string& path, const MeasurementMatrix& phi) {
  auto os = open_out(path);
  os << to_json(phi).dump() << '\n';
  close_checked(os, path);
}

inline nlohmann::json load_json(const std::string& path) {
  auto is = open_in(path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline MeasurementMatrix load_matrix(const std::string& path) {
  try {
    return matrix_from_json(load_json(path));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline Metadata matrix_metadata(const MeasurementMatrix& phi) {
  return {{"n", std::to_string(phi.n_rows())}, {"m", std::to_string(phi.n_cols())},
          {"seed", std::to_string(phi.seed())}, {"rng", std::string(Rng::kName)}};
}

/// Dense 0/1 CSV back to the sparse form. The seed comes from the header
/// when present.
inline MeasurementMatrix matrix_from_dense(const Eigen::MatrixXd& dense, std::uint64_t seed) {
  std::vector<MeasurementMatrix::ColumnEntries> columns;
  for (Eigen::Index c = 0; c < dense.cols(); ++c) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
      if (dense(r, c) == 1.0) {
        rows.push_back(r);
      } else if (dense(r, c) != 0.0) {
        throw IoError("dense matrix entries must be 0 or 1");
      }
    }
    if (rows.size() != 2) throw IoError("column " + std::to_string(c) + " does not have exactly two ones");
    columns.push_back({rows[0], rows[1]});
  }
  return MeasurementMatrix(dense.rows(), std::move(columns), seed);
}

inline MeasurementMatrix load_matrix_csv(const std::string& path) {
  auto is = open_in(path);
  auto [dense, meta] = read_matrix_csv(is);
  const std::string seed = lookup(meta, "seed", "0");
  return matrix_from_dense(dense, std::stoull(seed));
}

// ---- generator truth and reports -----------------------------------------

inline nlohmann::json to_json(const GeneratorSpec& spec, const GroundTruth& truth) {
  std::vector<double> gamma_active;
  for (std::size_t i : truth.active) gamma_active.push_back(truth.gamma[i]);
  return {{"partition", spec.partition.sizes()},
          {"n_channels", spec.n_channels},
          {"active_blocks", truth.active},
          {"gamma", truth.gamma},
          {"gamma_active", gamma_active},
          {"temporal_corr", spec.temporal_corr},
          {"spatial_corr", spec.spatial_corr},
          {"gamma_range", {spec.gamma_low, spec.gamma_high}},
          {"seed", spec.seed},
          {"rng", std::string(Rng::kName)}};
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json j = {{"algorithm", r.algorithm},
                      {"pearson_per_channel", r.pearson_per_channel},
                      {"compression_ratio_pct", r.compression_ratio_pct},
                      {"runtime_seconds", r.runtime_seconds},
                      {"iterations", r.iterations},
                      {"seed", r.seed}};
  j["nmse"] = std::isfinite(r.nmse) ? nlohmann::json(r.nmse) : nlohmann::json(nullptr);
  j["pearson_mean"] = std::isfinite(r.pearson_mean) ? nlohmann::json(r.pearson_mean) : nlohmann::json(nullptr);
  return j;
}

}  // namespace stcs::io
