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

#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "stcs/error.hpp"

namespace stcs {

inline std::string shape_string(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

/// An M x L block of samples, one column per channel. Single-channel
/// signals are the L = 1 case.
class MultichannelFrame {
 public:
  MultichannelFrame() = default;

  explicit MultichannelFrame(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
      throw InvalidDimension("frame must be non-empty, got " +
                             shape_string(values_.rows(), values_.cols()));
    }
    if (!values_.allFinite()) {
      throw InvalidArgument("frame contains non-finite values");
    }
  }

  static MultichannelFrame zeros(Eigen::Index samples, Eigen::Index channels) {
    return MultichannelFrame(Eigen::MatrixXd::Zero(samples, channels));
  }

  Eigen::Index n_samples() const { return values_.rows(); }
  Eigen::Index n_channels() const { return values_.cols(); }

  const Eigen::MatrixXd& values() const { return values_; }

  double operator()(Eigen::Index row, Eigen::Index col) const { return values_(row, col); }

  std::string shape() const { return shape_string(n_samples(), n_channels()); }

 private:
  Eigen::MatrixXd values_;
};

/// Sizes d_1..d_g of consecutive row blocks; they need not be equal.
class BlockPartition {
 public:
  BlockPartition() = default;

  explicit BlockPartition(std::vector<Eigen::Index> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw InvalidArgument("block partition needs at least one block");
    offsets_.reserve(sizes_.size());
    Eigen::Index offset = 0;
    for (Eigen::Index d : sizes_) {
      if (d < 1) throw InvalidArgument("block sizes must be positive");
      offsets_.push_back(offset);
      offset += d;
    }
    total_ = offset;
  }

  /// Equal blocks of `block`; when it does not divide `m` the last block
  /// absorbs the remainder.
  static BlockPartition uniform(Eigen::Index m, Eigen::Index block) {
    if (m < 1 || block < 1) {
      throw InvalidArgument("uniform partition needs m >= 1 and block >= 1");
    }
    const Eigen::Index g = std::max<Eigen::Index>(1, m / block);
    std::vector<Eigen::Index> sizes(static_cast<std::size_t>(g), std::min(block, m));
    sizes.back() += m - g * sizes.back();
    return BlockPartition(std::move(sizes));
  }

  std::size_t n_blocks() const { return sizes_.size(); }
  Eigen::Index size(std::size_t i) const { return sizes_[i]; }
  Eigen::Index offset(std::size_t i) const { return offsets_[i]; }
  Eigen::Index total() const { return total_; }
  const std::vector<Eigen::Index>& sizes() const { return sizes_; }

 private:
  std::vector<Eigen::Index> sizes_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index total_ = 0;
};

}  // namespace stcs
