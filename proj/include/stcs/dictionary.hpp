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

#include <cmath>
#include <numbers>
#include <utility>

#include "stcs/error.hpp"
#include "stcs/frame.hpp"
#include "stcs/measurement.hpp"

namespace stcs {

/// Square orthonormal basis D, x = D z and z = D^T x.
class Dictionary {
 public:
  explicit Dictionary(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols() || values_.rows() < 1) {
      throw InvalidDimension("dictionary must be square and non-empty, got " +
                             shape_string(values_.rows(), values_.cols()));
    }
  }

  Eigen::Index size() const { return values_.rows(); }
  const Eigen::MatrixXd& values() const { return values_; }

 private:
  Eigen::MatrixXd values_;
};

/// Orthonormal DCT-II basis; column k is the k-th cosine atom.
inline Dictionary dct_dictionary(Eigen::Index m) {
  if (m < 1) throw InvalidDimension("DCT dictionary needs m >= 1");
  const double md = static_cast<double>(m);
  Eigen::MatrixXd d(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / md) : std::sqrt(2.0 / md);
    for (Eigen::Index j = 0; j < m; ++j) {
      d(j, k) = scale * std::cos(std::numbers::pi * (2.0 * j + 1.0) * k / (2.0 * md));
    }
  }
  return Dictionary(std::move(d));
}

inline MultichannelFrame analyze(const Dictionary& d, const MultichannelFrame& x) {
  if (d.size() != x.n_samples()) {
    throw InvalidDimension("dictionary of size " + std::to_string(d.size()) +
                           " cannot analyze frame " + x.shape());
  }
  return MultichannelFrame(d.values().transpose() * x.values());
}

inline MultichannelFrame synthesize(const Dictionary& d, const MultichannelFrame& z) {
  if (d.size() != z.n_samples()) {
    throw InvalidDimension("dictionary of size " + std::to_string(d.size()) +
                           " cannot synthesize frame " + z.shape());
  }
  return MultichannelFrame(d.values() * z.values());
}

/// Dense Phi D; Phi has two ones per column so each row of the product is a
/// sum of dictionary rows.
inline Eigen::MatrixXd effective_matrix(const MeasurementMatrix& phi, const Dictionary& d) {
  if (phi.n_cols() != d.size()) {
    throw InvalidDimension("matrix " + shape_string(phi.n_rows(), phi.n_cols()) +
                           " does not match dictionary of size " + std::to_string(d.size()));
  }
  Eigen::MatrixXd product = Eigen::MatrixXd::Zero(phi.n_rows(), d.size());
  for (Eigen::Index c = 0; c < phi.n_cols(); ++c) {
    for (Eigen::Index r : phi.column(c)) product.row(r) += d.values().row(c);
  }
  return product;
}

}  // namespace stcs
