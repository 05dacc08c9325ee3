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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "stcs/error.hpp"
#include "stcs/frame.hpp"
#include "stcs/linalg.hpp"
#include "stcs/random.hpp"

namespace stcs {

struct GeneratorSpec {
  BlockPartition partition;
  Eigen::Index n_channels = 1;
  // Either a count (blocks drawn at random) or an explicit index list.
  std::size_t active_count = 0;
  std::optional<std::vector<std::size_t>> active_indices;
  double temporal_corr = 0.0;
  double spatial_corr = 0.0;
  double gamma_low = 1.0;
  double gamma_high = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_channels < 1) throw InvalidArgument("n_channels must be >= 1");
    if (!(std::abs(temporal_corr) < 1.0) || !(std::abs(spatial_corr) < 1.0)) {
      throw InvalidArgument("correlation coefficients must lie in (-1, 1)");
    }
    if (!(gamma_low > 0.0) || !(gamma_high >= gamma_low)) {
      throw InvalidArgument("gamma range must satisfy 0 < low <= high");
    }
    if (active_indices) {
      for (std::size_t i : *active_indices) {
        if (i >= partition.n_blocks()) throw InvalidArgument("active block index out of range");
      }
    } else if (active_count > partition.n_blocks()) {
      throw InvalidArgument("more active blocks requested than the partition has");
    }
  }
};

/// Hyperparameters the sample was drawn from.
struct GroundTruth {
  std::vector<std::size_t> active;  // sorted
  std::vector<double> gamma;         // 0 for inactive blocks
  std::vector<Eigen::MatrixXd> a_blocks;
  Eigen::MatrixXd b;
};

struct GeneratedFrame {
  MultichannelFrame x;
  GroundTruth truth;
};

/// AR(1) spatial correlation scaled to unit Frobenius norm.
inline Eigen::MatrixXd spatial_covariance(Eigen::Index l, double corr) {
  Eigen::MatrixXd b = linalg::ar1_toeplitz(l, corr);
  return b / b.norm();
}

/// F with F F^T = (gamma A) kron B, from the Cholesky factors of A and B.
/// Sampling vec(X_[i]^T) = F z is the same as X_[i] = sqrt(gamma) L_A Z L_B^T.
inline Eigen::MatrixXd kronecker_factor(double gamma, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd la = Eigen::LLT<Eigen::MatrixXd>(a).matrixL();
  const Eigen::MatrixXd lb = Eigen::LLT<Eigen::MatrixXd>(b).matrixL();
  Eigen::MatrixXd f(la.rows() * lb.rows(), la.cols() * lb.cols());
  for (Eigen::Index p = 0; p < la.rows(); ++p) {
    for (Eigen::Index q = 0; q < la.cols(); ++q) {
      f.block(p * lb.rows(), q * lb.cols(), lb.rows(), lb.cols()) = std::sqrt(gamma) * la(p, q) * lb;
    }
  }
  return f;
}

inline GeneratedFrame generate(const GeneratorSpec& spec) {
  spec.validate();
  const auto& partition = spec.partition;
  const std::size_t g = partition.n_blocks();
  const Eigen::Index l = spec.n_channels;
  Rng rng(spec.seed);

  GroundTruth truth;
  if (spec.active_indices) {
    truth.active = *spec.active_indices;
    std::sort(truth.active.begin(), truth.active.end());
    truth.active.erase(std::unique(truth.active.begin(), truth.active.end()), truth.active.end());
  } else {
    // Partial Fisher-Yates over block indices.
    std::vector<std::size_t> order(g);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t k = 0; k < spec.active_count; ++k) {
      const auto j = k + static_cast<std::size_t>(rng.below(g - k));
      std::swap(order[k], order[j]);
    }
    truth.active.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.active_count));
    std::sort(truth.active.begin(), truth.active.end());
  }

  truth.b = spatial_covariance(l, spec.spatial_corr);
  const Eigen::MatrixXd lb = Eigen::LLT<Eigen::MatrixXd>(truth.b).matrixL();
  truth.gamma.assign(g, 0.0);
  truth.a_blocks.resize(g);
  for (std::size_t i = 0; i < g; ++i) truth.a_blocks[i] = linalg::ar1_toeplitz(partition.size(i), spec.temporal_corr);

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(partition.total(), l);
  for (std::size_t i : truth.active) {
    const Eigen::Index d = partition.size(i);
    truth.gamma[i] = rng.uniform(spec.gamma_low, spec.gamma_high);
    const Eigen::MatrixXd la = Eigen::LLT<Eigen::MatrixXd>(truth.a_blocks[i]).matrixL();
    Eigen::MatrixXd z(d, l);
    for (Eigen::Index p = 0; p < d; ++p) {
      for (Eigen::Index q = 0; q < l; ++q) z(p, q) = rng.normal();
    }
    x.middleRows(partition.offset(i), d) = std::sqrt(truth.gamma[i]) * la * z * lb.transpose();
  }
  return {MultichannelFrame(std::move(x)), std::move(truth)};
}

}  // namespace stcs
