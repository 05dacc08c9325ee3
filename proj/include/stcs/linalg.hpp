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

namespace stcs::linalg {

// Eigenvalue floor applied before any root or inverse of a symmetric matrix.
inline constexpr double kEigenFloor = 1e-12;

template <typename UnaryOp>
Eigen::MatrixXd symmetric_function(const Eigen::MatrixXd& s, UnaryOp op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (s + s.transpose()));
  Eigen::VectorXd values = eig.eigenvalues().unaryExpr(op);
  return eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
}

/// Symmetric root S^{1/2}; negative rounding noise is clamped to zero.
inline Eigen::MatrixXd sqrtm(const Eigen::MatrixXd& s) {
  return symmetric_function(s, [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

/// Symmetric inverse root S^{-1/2} with eigenvalues floored at kEigenFloor.
inline Eigen::MatrixXd inv_sqrtm(const Eigen::MatrixXd& s) {
  return symmetric_function(s, [](double v) { return 1.0 / std::sqrt(std::max(v, kEigenFloor)); });
}

/// Inverse of a symmetric positive definite matrix. Uses Cholesky and falls
/// back to the floored eigendecomposition when the factorization fails.
inline Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& s) {
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(s.rows(), s.cols()));
    if (inv.allFinite()) return 0.5 * (inv + inv.transpose());
  }
  return symmetric_function(s, [](double v) { return 1.0 / std::max(v, kEigenFloor); });
}

/// Toeplitz(1, r, r^2, ..., r^{d-1}).
inline Eigen::MatrixXd ar1_toeplitz(Eigen::Index d, double r) {
  Eigen::MatrixXd t(d, d);
  for (Eigen::Index p = 0; p < d; ++p) {
    for (Eigen::Index q = 0; q < d; ++q) t(p, q) = std::pow(r, static_cast<double>(std::abs(p - q)));
  }
  return t;
}

inline double min_eigenvalue(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

inline double asymmetry(const Eigen::MatrixXd& s) {
  return (s - s.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace stcs::linalg
