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

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stcs/error.hpp"
#include "stcs/frame.hpp"
#include "stcs/random.hpp"

namespace stcs {

/// Sparse binary N x M sensing matrix with exactly two ones per column,
/// stored as the pair of row indices of each column (ascending).
class MeasurementMatrix {
 public:
  using ColumnEntries = std::array<Eigen::Index, 2>;

  MeasurementMatrix(Eigen::Index n_rows, std::vector<ColumnEntries> columns, std::uint64_t seed)
      : n_rows_(n_rows), columns_(std::move(columns)), seed_(seed) {
    if (n_rows_ < 2) {
      throw InvalidDimension("measurement matrix needs n >= 2 rows, got " + std::to_string(n_rows_));
    }
    if (columns_.empty()) throw InvalidDimension("measurement matrix needs m >= 1 columns");
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const auto [r0, r1] = columns_[c];
      if (r0 == r1 || r0 < 0 || r1 < 0 || r0 >= n_rows_ || r1 >= n_rows_) {
        throw InvalidArgument("column " + std::to_string(c) +
                              " must hold two distinct row indices in [0, n)");
      }
      if (r1 < r0) columns_[c] = {r1, r0};
    }
  }

  Eigen::Index n_rows() const { return n_rows_; }
  Eigen::Index n_cols() const { return static_cast<Eigen::Index>(columns_.size()); }
  std::uint64_t seed() const { return seed_; }
  const std::vector<ColumnEntries>& columns() const { return columns_; }
  const ColumnEntries& column(Eigen::Index c) const { return columns_[static_cast<std::size_t>(c)]; }

  friend bool operator==(const MeasurementMatrix&, const MeasurementMatrix&) = default;

 private:
  Eigen::Index n_rows_;
  std::vector<ColumnEntries> columns_;
  std::uint64_t seed_;
};

/// Each column gets two distinct rows drawn uniformly without replacement,
/// independently across columns.
inline MeasurementMatrix make_sparse_binary(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  if (n < 2) throw InvalidDimension("cannot place two distinct rows in n = " + std::to_string(n));
  if (m < 1) throw InvalidDimension("m must be >= 1, got " + std::to_string(m));
  Rng rng(seed);
  const auto rows = static_cast<std::uint64_t>(n);
  std::vector<MeasurementMatrix::ColumnEntries> columns(static_cast<std::size_t>(m));
  for (auto& entries : columns) {
    const auto first = static_cast<Eigen::Index>(rng.below(rows));
    // Second pick from the n-1 remaining rows.
    auto second = static_cast<Eigen::Index>(rng.below(rows - 1));
    if (second >= first) ++second;
    entries = {first, second};
  }
  return MeasurementMatrix(n, std::move(columns), seed);
}

/// Y = Phi X in O(2 M L).
inline MultichannelFrame compress(const MeasurementMatrix& phi, const MultichannelFrame& x) {
  if (phi.n_cols() != x.n_samples()) {
    throw InvalidDimension("cannot compress: matrix is " + shape_string(phi.n_rows(), phi.n_cols()) +
                           " but frame is " + x.shape());
  }
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(phi.n_rows(), x.n_channels());
  const auto& xv = x.values();
  for (Eigen::Index c = 0; c < phi.n_cols(); ++c) {
    for (Eigen::Index r : phi.column(c)) y.row(r) += xv.row(c);
  }
  return MultichannelFrame(std::move(y));
}

inline Eigen::MatrixXd densify(const MeasurementMatrix& phi) {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(phi.n_rows(), phi.n_cols());
  for (Eigen::Index c = 0; c < phi.n_cols(); ++c) {
    for (Eigen::Index r : phi.column(c)) dense(r, c) = 1.0;
  }
  return dense;
}

}  // namespace stcs
