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

// Spatio-temporal sparse Bayesian learning (EM variant) for jointly
// recovering L correlated channels from Y = A X, where A is the effective
// N x M sensing matrix (Phi, or Phi D when recovering dictionary
// coefficients).
//
// Prior on each row block X_[i] (d_i x L):
//     vec(X_[i]^T) ~ N(0, (gamma_i A_i) kron B),
// gamma_i a block scale (0 removes the block), A_i the d_i x d_i temporal
// correlation and B the L x L spatial correlation shared by all blocks.
// Each iteration alternates between the spatially whitened model
// (Y B^{-1/2}), where mu, Sigma, gamma_i and A_i are updated, and the
// temporally whitened model, where B is updated.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "stcs/error.hpp"
#include "stcs/frame.hpp"
#include "stcs/linalg.hpp"

namespace stcs {

enum class AConstraint {
  free,          // raw EM update
  toeplitz_ar1,  // shared AR(1) Toeplitz projection across active blocks
};

struct SolverOptions {
  int max_iterations = 40;
  // Stop when ||mu_t - mu_{t-1}||_F / ||mu_{t-1}||_F falls below this.
  double tolerance = 1e-8;
  double lambda = 1e-10;
  // Blocks with gamma_i <= prune_gamma * max_j gamma_j are zeroed and frozen.
  double prune_gamma = 1e-4;
  AConstraint constrain_a = AConstraint::toeplitz_ar1;
  double b_ridge = 1e-6;

  void validate() const {
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
    if (!(tolerance >= 0.0) || !(lambda >= 0.0) || !(prune_gamma >= 0.0) || !(b_ridge >= 0.0)) {
      throw InvalidArgument("solver thresholds must be nonnegative");
    }
  }
};

struct SolverState {
  std::vector<double> gamma;
  std::vector<Eigen::MatrixXd> a_blocks;
  Eigen::MatrixXd b;  // unit Frobenius norm
  Eigen::MatrixXd mu;  // posterior mean of the spatially whitened coefficients
  std::vector<Eigen::MatrixXd> sigma_blocks;  // diagonal blocks of the posterior covariance
  std::vector<bool> active;

  std::size_t n_active() const { return static_cast<std::size_t>(std::count(active.begin(), active.end(), true)); }
};

struct IterationRecord {
  double relative_change = 0.0;
  std::size_t active_blocks = 0;
  bool b_held = false;  // no active block contributed, previous B kept
};

struct RecoveryResult {
  MultichannelFrame x_hat;
  int iterations = 0;
  bool converged = false;
  SolverState final_state;
  std::vector<IterationRecord> trace;
};

struct PosteriorMoments {
  Eigen::MatrixXd mu;
  std::vector<Eigen::MatrixXd> sigma_blocks;
};

/// Called after every iteration with the 1-based iteration index, the state
/// and the current estimate X = mu B^{1/2}.
using IterationObserver = std::function<void(int, const SolverState&, const Eigen::MatrixXd&)>;

namespace detail {

inline void check_partition(const BlockPartition& partition, Eigen::Index m) {
  if (partition.total() != m) {
    throw InvalidDimension("block partition sums to " + std::to_string(partition.total()) +
                           " but the signal has " + std::to_string(m) + " rows");
  }
}

inline void check_system(const MultichannelFrame& y, const Eigen::MatrixXd& a_eff,
                         const BlockPartition& partition) {
  if (a_eff.rows() != y.n_samples()) {
    throw InvalidDimension("measurements " + y.shape() + " do not match sensing matrix " +
                           shape_string(a_eff.rows(), a_eff.cols()));
  }
  check_partition(partition, a_eff.cols());
}

inline double relative_change(const Eigen::MatrixXd& next, const Eigen::MatrixXd& prev) {
  const double ref = prev.norm();
  const double diff = (next - prev).norm();
  if (ref > 0.0) return diff / ref;
  return diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace detail

/// Minimum-norm least-squares start, A_i = I, gamma_i = 1, B = I / sqrt(L).
/// Rows of `a_eff` that are exactly linearly dependent on earlier rows
/// (all-zero or repeated rows are common with weight-2 binary matrices) are
/// redundant equations and are left out; the conditioning check applies to
/// the remaining rows.
inline SolverState init_state(const MultichannelFrame& y, const Eigen::MatrixXd& a_eff,
                              const BlockPartition& partition, const SolverOptions& opts) {
  opts.validate();
  detail::check_system(y, a_eff, partition);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_eff.transpose());
  const Eigen::Index rank = qr.rank();
  if (rank == 0) throw IllConditioned("sensing matrix is identically zero");
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(rank));
  for (Eigen::Index k = 0; k < rank; ++k) rows[static_cast<std::size_t>(k)] = qr.colsPermutation().indices()(k);
  std::sort(rows.begin(), rows.end());

  Eigen::MatrixXd a_used(rank, a_eff.cols());
  Eigen::MatrixXd y_used(rank, y.n_channels());
  for (Eigen::Index k = 0; k < rank; ++k) {
    a_used.row(k) = a_eff.row(rows[static_cast<std::size_t>(k)]);
    y_used.row(k) = y.values().row(rows[static_cast<std::size_t>(k)]);
  }

  const Eigen::MatrixXd gram = a_used * a_used.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw IllConditioned("A A^T is ill-conditioned (condition number " +
                         (lo > 0.0 ? std::to_string(hi / lo) : std::string("inf")) +
                         "); the sensing matrix lacks full row rank");
  }

  const std::size_t g = partition.n_blocks();
  const Eigen::Index l = y.n_channels();
  SolverState state;
  state.mu = a_used.transpose() * gram.ldlt().solve(y_used);
  state.gamma.assign(g, 1.0);
  state.active.assign(g, true);
  state.a_blocks.reserve(g);
  state.sigma_blocks.reserve(g);
  for (std::size_t i = 0; i < g; ++i) {
    const Eigen::Index d = partition.size(i);
    state.a_blocks.push_back(Eigen::MatrixXd::Identity(d, d));
    state.sigma_blocks.push_back(Eigen::MatrixXd::Zero(d, d));
  }
  state.b = Eigen::MatrixXd::Identity(l, l) / std::sqrt(static_cast<double>(l));
  return state;
}

/// B = Bc / ||Bc||_F with Bc = sum_i gamma_i^{-1} X_[i]^T A_i^{-1} X_[i] over
/// active blocks, plus ridge * tr(Bc) / L * I. Returns the previous B when no
/// active block contributes.
inline Eigen::MatrixXd update_spatial_b(const SolverState& state, const Eigen::MatrixXd& x_current,
                                        const BlockPartition& partition, double ridge) {
  const Eigen::Index l = x_current.cols();
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(l, l);
  bool any = false;
  for (std::size_t i = 0; i < partition.n_blocks(); ++i) {
    if (!state.active[i] || !(state.gamma[i] > 0.0)) continue;
    const auto xi = x_current.middleRows(partition.offset(i), partition.size(i));
    const Eigen::MatrixXd a_inv = linalg::spd_inverse(state.a_blocks[i]);
    raw.noalias() += (xi.transpose() * a_inv * xi) / state.gamma[i];
    any = true;
  }
  if (!any) return state.b;
  raw = 0.5 * (raw + raw.transpose());
  raw.diagonal().array() += ridge * raw.trace() / static_cast<double>(l);
  const double norm = raw.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) return state.b;
  return raw / norm;
}

/// mu = Pi A^T (lambda I + A Pi A^T)^{-1} Y B^{-1/2} and the diagonal blocks
/// of Sigma = Pi - Pi A^T (lambda I + A Pi A^T)^{-1} A Pi, with
/// Pi = blockdiag(gamma_i A_i) over active blocks.
inline PosteriorMoments posterior_moments(const MultichannelFrame& y, const Eigen::MatrixXd& a_eff,
                                          const SolverState& state, const BlockPartition& partition,
                                          double lambda) {
  detail::check_system(y, a_eff, partition);
  const Eigen::Index n = a_eff.rows();
  const std::size_t g = partition.n_blocks();

  PosteriorMoments out;
  out.mu = Eigen::MatrixXd::Zero(a_eff.cols(), y.n_channels());
  out.sigma_blocks.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    out.sigma_blocks[i] = Eigen::MatrixXd::Zero(partition.size(i), partition.size(i));
  }

  // A_i Pi_i for each active block, N x d_i.
  std::vector<Eigen::MatrixXd> a_pi(g);
  Eigen::MatrixXd h = lambda * Eigen::MatrixXd::Identity(n, n);
  bool any = false;
  for (std::size_t i = 0; i < g; ++i) {
    if (!state.active[i]) continue;
    const auto cols = a_eff.middleCols(partition.offset(i), partition.size(i));
    a_pi[i] = cols * (state.gamma[i] * state.a_blocks[i]);
    h.noalias() += a_pi[i] * cols.transpose();
    any = true;
  }
  if (!any) return out;
  h = 0.5 * (h + h.transpose());

  // Singular when a pivot vanishes relative to the largest one.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success ||
      !(pivots.minCoeff() > std::numeric_limits<double>::epsilon() * pivots.maxCoeff())) {
    throw SingularSystem("lambda I + A Pi A^T is numerically singular; increase lambda (currently " +
                         std::to_string(lambda) + ")");
  }

  const Eigen::MatrixXd y_white = y.values() * linalg::inv_sqrtm(state.b);
  const Eigen::MatrixXd w = ldlt.solve(y_white);
  for (std::size_t i = 0; i < g; ++i) {
    if (!state.active[i]) continue;
    const Eigen::Index off = partition.offset(i);
    out.mu.middleRows(off, partition.size(i)).noalias() = a_pi[i].transpose() * w;
    const Eigen::MatrixXd gain = ldlt.solve(a_pi[i]);
    Eigen::MatrixXd sigma = state.gamma[i] * state.a_blocks[i] - a_pi[i].transpose() * gain;
    out.sigma_blocks[i] = 0.5 * (sigma + sigma.transpose());
  }
  if (!out.mu.allFinite()) {
    throw SingularSystem("posterior mean is not finite; increase lambda (currently " +
                         std::to_string(lambda) + ")");
  }
  return out;
}

/// gamma_i = 1/(L d_i) sum_l Tr[A_i^{-1} (Sigma_[i] + mu_[i]l mu_[i]l^T)].
inline std::vector<double> update_gamma(const Eigen::MatrixXd& mu,
                                        const std::vector<Eigen::MatrixXd>& sigma_blocks,
                                        const std::vector<Eigen::MatrixXd>& a_blocks,
                                        const BlockPartition& partition, Eigen::Index n_channels) {
  const double l = static_cast<double>(n_channels);
  std::vector<double> gamma(partition.n_blocks());
  for (std::size_t i = 0; i < partition.n_blocks(); ++i) {
    const Eigen::Index d = partition.size(i);
    const auto mu_i = mu.middleRows(partition.offset(i), d);
    const Eigen::MatrixXd a_inv = linalg::spd_inverse(a_blocks[i]);
    const double sigma_term = l * (a_inv.cwiseProduct(sigma_blocks[i])).sum();
    const double mean_term = mu_i.cwiseProduct(a_inv * mu_i).sum();
    gamma[i] = std::max(0.0, (sigma_term + mean_term) / (l * static_cast<double>(d)));
  }
  return gamma;
}

struct ABlockUpdate {
  std::vector<Eigen::MatrixXd> a_blocks;
  std::vector<bool> pruned;  // gamma_i at or below the floor; A_i left as it was
};

/// A_i = 1/L sum_l (Sigma_[i] + mu_[i]l mu_[i]l^T) / gamma_i, optionally
/// projected onto a Toeplitz AR(1) matrix whose coefficient is pooled over
/// all updated blocks.
inline ABlockUpdate update_a_blocks(const Eigen::MatrixXd& mu,
                                    const std::vector<Eigen::MatrixXd>& sigma_blocks,
                                    const std::vector<double>& gamma,
                                    const std::vector<Eigen::MatrixXd>& previous,
                                    const BlockPartition& partition, Eigen::Index n_channels,
                                    AConstraint constrain, double gamma_floor = 0.0) {
  const double l = static_cast<double>(n_channels);
  ABlockUpdate out{previous, std::vector<bool>(partition.n_blocks(), false)};

  double diag_sum = 0.0;
  double super_sum = 0.0;
  Eigen::Index diag_count = 0;
  Eigen::Index super_count = 0;
  for (std::size_t i = 0; i < partition.n_blocks(); ++i) {
    if (!(gamma[i] > gamma_floor)) {
      out.pruned[i] = true;
      continue;
    }
    const Eigen::Index d = partition.size(i);
    const auto mu_i = mu.middleRows(partition.offset(i), d);
    Eigen::MatrixXd raw = (sigma_blocks[i] + mu_i * mu_i.transpose() / l) / gamma[i];
    raw = 0.5 * (raw + raw.transpose());
    diag_sum += raw.trace();
    diag_count += d;
    if (d > 1) {
      super_sum += raw.diagonal(1).sum();
      super_count += d - 1;
    }
    out.a_blocks[i] = std::move(raw);
  }

  if (constrain == AConstraint::toeplitz_ar1 && diag_count > 0) {
    double r = 0.0;
    const double diag_mean = diag_sum / static_cast<double>(diag_count);
    if (super_count > 0 && diag_mean > 0.0) {
      const double ratio = (super_sum / static_cast<double>(super_count)) / diag_mean;
      r = std::copysign(std::min(std::abs(ratio), 0.99), ratio);
    }
    for (std::size_t i = 0; i < partition.n_blocks(); ++i) {
      if (!out.pruned[i]) out.a_blocks[i] = linalg::ar1_toeplitz(partition.size(i), r);
    }
  }
  return out;
}

/// X = mu B^{1/2}.
inline Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& b) {
  return mu * linalg::sqrtm(b);
}

/// One full pass of the alternating updates. Mutates `state` and returns the
/// new estimate X. Reports whether B had to be held.
inline Eigen::MatrixXd stsbl_iteration(const MultichannelFrame& y, const Eigen::MatrixXd& a_eff,
                                       const BlockPartition& partition, const SolverOptions& opts,
                                       SolverState& state, const Eigen::MatrixXd& x_current,
                                       bool* b_held = nullptr) {
  const Eigen::Index l = y.n_channels();
  const bool any_active = state.n_active() > 0;
  if (any_active) state.b = update_spatial_b(state, x_current, partition, opts.b_ridge);
  if (b_held) *b_held = !any_active;

  PosteriorMoments moments = posterior_moments(y, a_eff, state, partition, opts.lambda);
  state.mu = std::move(moments.mu);
  state.sigma_blocks = std::move(moments.sigma_blocks);

  std::vector<double> gamma = update_gamma(state.mu, state.sigma_blocks, state.a_blocks, partition, l);
  double gamma_max = 0.0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (state.active[i]) gamma_max = std::max(gamma_max, gamma[i]);
  }
  const double floor = opts.prune_gamma * gamma_max;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (!state.active[i] || gamma[i] <= floor) {
      state.active[i] = false;
      gamma[i] = 0.0;
      state.mu.middleRows(partition.offset(i), partition.size(i)).setZero();
      state.sigma_blocks[i].setZero();
    }
  }
  state.gamma = std::move(gamma);

  ABlockUpdate a_update = update_a_blocks(state.mu, state.sigma_blocks, state.gamma, state.a_blocks,
                                          partition, l, opts.constrain_a, 0.0);
  state.a_blocks = std::move(a_update.a_blocks);

  return reconstruct(state.mu, state.b);
}

/// Joint recovery of all channels. Returns coefficients in the domain of
/// `a_eff`; compose with a dictionary to get time-domain signals.
inline RecoveryResult solve(const MultichannelFrame& y, const Eigen::MatrixXd& a_eff,
                            const BlockPartition& partition, const SolverOptions& opts,
                            const IterationObserver& observer = {}) {
  SolverState state = init_state(y, a_eff, partition, opts);
  Eigen::MatrixXd x = state.mu;

  RecoveryResult result;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Eigen::MatrixXd mu_prev = state.mu;
    IterationRecord record;
    x = stsbl_iteration(y, a_eff, partition, opts, state, x, &record.b_held);
    if (!x.allFinite() || !state.mu.allFinite()) {
      throw Divergence("non-finite estimate at iteration " + std::to_string(it), it);
    }
    record.relative_change = detail::relative_change(state.mu, mu_prev);
    record.active_blocks = state.n_active();
    result.trace.push_back(record);
    result.iterations = it;
    if (observer) observer(it, state, x);
    // The first posterior mean is compared against the least-squares start,
    // which it can match exactly when L = 1.
    if (it > 1 && record.relative_change < opts.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.x_hat = MultichannelFrame(std::move(x));
  result.final_state = std::move(state);
  return result;
}

/// Runs `solve` on every channel separately (L = 1 each) and stacks the
/// estimates. `iterations` is the largest per-channel count, `converged`
/// holds only if every channel converged, and `final_state` / `trace` are
/// those of the last channel.
inline RecoveryResult solve_per_channel(const MultichannelFrame& y, const Eigen::MatrixXd& a_eff,
                                        const BlockPartition& partition, const SolverOptions& opts,
                                        const IterationObserver& observer = {}) {
  detail::check_system(y, a_eff, partition);
  Eigen::MatrixXd x(a_eff.cols(), y.n_channels());
  RecoveryResult out;
  out.converged = true;
  for (Eigen::Index c = 0; c < y.n_channels(); ++c) {
    RecoveryResult one = solve(MultichannelFrame(y.values().col(c)), a_eff, partition, opts, observer);
    x.col(c) = one.x_hat.values().col(0);
    out.iterations = std::max(out.iterations, one.iterations);
    out.converged = out.converged && one.converged;
    out.final_state = std::move(one.final_state);
    out.trace = std::move(one.trace);
  }
  out.x_hat = MultichannelFrame(std::move(x));
  return out;
}

}  // namespace stcs
