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
#include <span>
#include <string>
#include <vector>

#include "stcs/error.hpp"
#include "stcs/frame.hpp"

namespace stcs {

struct Report {
  double nmse = 0.0;  // NaN when no reference was available
  std::vector<double> pearson_per_channel;
  double pearson_mean = 0.0;
  double compression_ratio_pct = 0.0;
  double runtime_seconds = 0.0;
  int iterations = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
};

/// ||x_hat - x_true||_F^2 / ||x_true||_F^2.
inline double nmse(const MultichannelFrame& x_hat, const MultichannelFrame& x_true) {
  if (x_hat.n_samples() != x_true.n_samples() || x_hat.n_channels() != x_true.n_channels()) {
    throw InvalidDimension("nmse needs equal shapes, got " + x_hat.shape() + " and " + x_true.shape());
  }
  const double ref = x_true.values().squaredNorm();
  if (!(ref > 0.0)) throw UndefinedMetric("nmse is undefined for an all-zero reference");
  return (x_hat.values() - x_true.values()).squaredNorm() / ref;
}

/// Sample Pearson correlation, clamped to [-1, 1].
inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw InvalidArgument("pearson needs two sequences of equal length >= 2");
  }
  const auto n = static_cast<Eigen::Index>(a.size());
  const Eigen::Map<const Eigen::VectorXd> va(a.data(), n);
  const Eigen::Map<const Eigen::VectorXd> vb(b.data(), n);
  const Eigen::VectorXd da = va.array() - va.mean();
  const Eigen::VectorXd db = vb.array() - vb.mean();
  const double sa = da.norm();
  const double sb = db.norm();
  if (!(sa > 0.0) || !(sb > 0.0)) throw UndefinedMetric("pearson is undefined for a constant sequence");
  return std::clamp(da.dot(db) / (sa * sb), -1.0, 1.0);
}

inline std::vector<double> pearson_per_channel(const MultichannelFrame& x_hat, const MultichannelFrame& x_true) {
  if (x_hat.n_samples() != x_true.n_samples() || x_hat.n_channels() != x_true.n_channels()) {
    throw InvalidDimension("pearson needs equal shapes, got " + x_hat.shape() + " and " + x_true.shape());
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(x_true.n_channels()));
  const auto rows = static_cast<std::size_t>(x_true.n_samples());
  for (Eigen::Index c = 0; c < x_true.n_channels(); ++c) {
    out.push_back(pearson({x_hat.values().col(c).data(), rows}, {x_true.values().col(c).data(), rows}));
  }
  return out;
}

/// (M - N) / M * 100.
inline double compression_ratio(Eigen::Index m, Eigen::Index n) {
  if (n < 1 || m < 1 || n > m) throw InvalidArgument("compression ratio needs 0 < n <= m");
  return static_cast<double>(m - n) * 100.0 / static_cast<double>(m);
}

}  // namespace stcs
