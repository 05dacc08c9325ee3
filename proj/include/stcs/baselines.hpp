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
#include <limits>
#include <vector>

#include "stcs/error.hpp"
#include "stcs/frame.hpp"

namespace stcs {

struct SompOptions {
  Eigen::Index max_atoms = 1;
  // Stop once ||R||_F / ||Y||_F drops below this.
  double residual_tol = 1e-6;

  /// floor(N / 2) atoms, residual tolerance 1e-6.
  static SompOptions defaults_for(Eigen::Index n_measurements) {
    return {std::max<Eigen::Index>(1, n_measurements / 2), 1e-6};
  }
};

struct SompResult {
  MultichannelFrame x;
  std::vector<Eigen::Index> support;  // in selection order
  std::vector<double> residual_norms;  // ||R||_F before the first pick and after each
  bool rank_deficient = false;         // stopped because the next atom was dependent
};

/// Simultaneous orthogonal matching pursuit. Each step picks the column
/// maximizing ||a_j^T R||_2 / ||a_j||_2 and refits Y on the selected columns.
inline SompResult somp(const MultichannelFrame& y, const Eigen::MatrixXd& a_eff, const SompOptions& opts) {
  const Eigen::Index n = a_eff.rows();
  const Eigen::Index m = a_eff.cols();
  if (y.n_samples() != n) {
    throw InvalidDimension("measurements " + y.shape() + " do not match sensing matrix " + shape_string(n, m));
  }
  if (opts.max_atoms < 1 || opts.max_atoms > m) {
    throw InvalidArgument("max_atoms must lie in [1, M]");
  }
  if (!(opts.residual_tol >= 0.0)) throw InvalidArgument("residual_tol must be nonnegative");

  const Eigen::VectorXd col_norms = a_eff.colwise().norm().transpose();
  if (col_norms.minCoeff() <= 0.0) throw InvalidArgument("sensing matrix has a zero column");

  const Eigen::MatrixXd& yv = y.values();
  const double y_norm = yv.norm();
  Eigen::MatrixXd residual = yv;
  Eigen::MatrixXd coef;
  std::vector<bool> selected(static_cast<std::size_t>(m), false);

  SompResult out;
  out.residual_norms.push_back(y_norm);
  while (static_cast<Eigen::Index>(out.support.size()) < opts.max_atoms &&
         out.residual_norms.back() > opts.residual_tol * y_norm) {
    const Eigen::VectorXd scores =
        (a_eff.transpose() * residual).rowwise().norm().cwiseQuotient(col_norms);
    Eigen::Index best = -1;
    double best_score = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!selected[static_cast<std::size_t>(j)] && scores(j) > best_score) {
        best = j;
        best_score = scores(j);
      }
    }
    if (best < 0) break;  // residual orthogonal to every remaining column

    std::vector<Eigen::Index> trial = out.support;
    trial.push_back(best);
    Eigen::MatrixXd a_s(n, static_cast<Eigen::Index>(trial.size()));
    for (std::size_t k = 0; k < trial.size(); ++k) a_s.col(static_cast<Eigen::Index>(k)) = a_eff.col(trial[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_s);
    if (qr.rank() < a_s.cols()) {
      out.rank_deficient = true;
      break;
    }
    coef = qr.solve(yv);
    residual = yv - a_s * coef;
    out.support = std::move(trial);
    selected[static_cast<std::size_t>(best)] = true;
    out.residual_norms.push_back(residual.norm());
  }

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, y.n_channels());
  for (std::size_t k = 0; k < out.support.size(); ++k) x.row(out.support[k]) = coef.row(static_cast<Eigen::Index>(k));
  out.x = MultichannelFrame(std::move(x));
  return out;
}

}  // namespace stcs
