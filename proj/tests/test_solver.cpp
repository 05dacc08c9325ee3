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

#include <catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <vector>

#include "dense_oracle.hpp"
#include "stcs/dictionary.hpp"
#include "stcs/measurement.hpp"
#include "stcs/metrics.hpp"
#include "stcs/solver.hpp"
#include "stcs/synthgen.hpp"
#include "test_support.hpp"

using namespace stcs;
using stcs::testing::max_abs_diff;
using stcs::testing::random_matrix;
using stcs::testing::random_spd;
using stcs::testing::rel_diff;

namespace {

SolverState random_state(const BlockPartition& partition, Eigen::Index m, Eigen::Index l, std::uint64_t seed) {
    Rng rng(seed);
    SolverState s;
    for (std::size_t i = 0; i < partition.n_blocks(); ++i) {
        s.gamma.push_back(rng.uniform(0.5, 2.0));
        s.a_blocks.push_back(random_spd(partition.size(i), seed + 17 * (i + 1)));
        s.sigma_blocks.push_back(Eigen::MatrixXd::Zero(partition.size(i), partition.size(i)));
        s.active.push_back(true);
    }
    s.b = Eigen::MatrixXd::Identity(l, l) / std::sqrt(static_cast<double>(l));
    s.mu = Eigen::MatrixXd::Zero(m, l);
    return s;
}

struct Instance {
    GeneratedFrame gen;
    Eigen::MatrixXd a_eff;
    MultichannelFrame y;
};

Instance prior_instance(std::uint64_t seed, Eigen::Index l = 4, double corr = 0.9) {
    GeneratorSpec spec;
    spec.partition = BlockPartition::uniform(256, 8);
    spec.n_channels = l;
    spec.active_count = 4;
    spec.temporal_corr = corr;
    spec.spatial_corr = corr;
    spec.seed = seed;
    auto gen = generate(spec);
    const auto phi = make_sparse_binary(100, 256, seed + 1'000'003);
    Eigen::MatrixXd a = densify(phi);
    auto y = compress(phi, gen.x);
    return {std::move(gen), std::move(a), std::move(y)};
}

}  // namespace

// ---- init_state -------------------------------------------------------------

TEST_CASE("init_state: identity sensing returns Y")
{
    const MultichannelFrame y(random_matrix(12, 3, 1));
    const auto s = init_state(y, Eigen::MatrixXd::Identity(12, 12), BlockPartition::uniform(12, 4), {});
    CHECK(max_abs_diff(s.mu, y.values()) < 1e-12);
    for (double g : s.gamma) CHECK(g == 1.0);
    for (const auto& a : s.a_blocks) CHECK(a == Eigen::MatrixXd::Identity(4, 4));
    CHECK(std::abs(s.b.norm() - 1.0) < 1e-15);
    CHECK(max_abs_diff(s.b, Eigen::MatrixXd::Identity(3, 3) / std::sqrt(3.0)) < 1e-15);
}

TEST_CASE("init_state: minimum-norm least squares satisfies the measurements")
{
    const Eigen::MatrixXd a = random_matrix(45, 500, 2);
    const MultichannelFrame y(random_matrix(45, 6, 3));
    const auto s = init_state(y, a, BlockPartition::uniform(500, 25), {});
    CHECK(rel_diff(a * s.mu, y.values()) < 1e-8);
    // Minimum norm: the solution lies in the row space of A.
    const Eigen::MatrixXd oracle = a.transpose() * (a * a.transpose()).fullPivLu().solve(y.values());
    CHECK(rel_diff(s.mu, oracle) < 1e-8);
}

TEST_CASE("init_state: exactly redundant rows are tolerated")
{
    Eigen::MatrixXd a = random_matrix(10, 30, 4);
    a.row(3).setZero();
    a.row(7) = a.row(2);
    const Eigen::MatrixXd x = random_matrix(30, 2, 5);
    const MultichannelFrame y(a * x);
    const auto s = init_state(y, a, BlockPartition::uniform(30, 5), {});
    CHECK(rel_diff(a * s.mu, y.values()) < 1e-8);
}

TEST_CASE("init_state: ill-conditioned sensing matrix is rejected")
{
    Eigen::MatrixXd a = random_matrix(6, 20, 6);
    a.row(5) = a.row(4);
    a(5, 0) += 1e-9;
    CHECK_THROWS_AS(init_state(MultichannelFrame(random_matrix(6, 1, 7)), a, BlockPartition::uniform(20, 5), {}),
                    IllConditioned);
    CHECK_THROWS_AS(init_state(MultichannelFrame(random_matrix(6, 1, 7)), Eigen::MatrixXd::Zero(6, 20),
                               BlockPartition::uniform(20, 5), {}),
                    IllConditioned);
}

TEST_CASE("init_state: shape and option validation")
{
    const MultichannelFrame y(random_matrix(5, 1, 8));
    CHECK_THROWS_AS(init_state(y, random_matrix(5, 20, 9), BlockPartition::uniform(18, 6), {}), InvalidDimension);
    CHECK_THROWS_AS(init_state(y, random_matrix(6, 20, 9), BlockPartition::uniform(20, 5), {}), InvalidDimension);
    SolverOptions bad;
    bad.max_iterations = 0;
    CHECK_THROWS_AS(init_state(y, random_matrix(5, 20, 9), BlockPartition::uniform(20, 5), bad), InvalidArgument);
    bad = {};
    bad.lambda = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

// ---- update_spatial_b -------------------------------------------------------

TEST_CASE("update_spatial_b: direct substitution")
{
    const BlockPartition p({2});
    SolverState s = random_state(p, 2, 2, 1);
    s.gamma = {1.0};
    s.a_blocks = {Eigen::MatrixXd::Identity(2, 2)};
    const Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(2, 2) / std::sqrt(2.0);
    CHECK(max_abs_diff(update_spatial_b(s, Eigen::MatrixXd::Identity(2, 2), p, 0.0), expected) < 1e-15);

    // Scale drops out after normalization.
    s.gamma = {2.0};
    CHECK(max_abs_diff(update_spatial_b(s, 2.0 * Eigen::MatrixXd::Identity(2, 2), p, 0.0), expected) < 1e-15);
}

TEST_CASE("update_spatial_b: matches a direct loop over the sum")
{
    const BlockPartition p({3, 5, 4, 4});
    const Eigen::Index l = 5;
    SolverState s = random_state(p, 16, l, 21);
    s.active[2] = false;
    const Eigen::MatrixXd x = random_matrix(16, l, 22);
    const double ridge = 1e-6;

    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(l, l);
    for (std::size_t i = 0; i < p.n_blocks(); ++i) {
        if (!s.active[i]) continue;
        const Eigen::MatrixXd a_inv = s.a_blocks[i].fullPivLu().inverse();
        for (Eigen::Index r = 0; r < l; ++r)
            for (Eigen::Index c = 0; c < l; ++c)
                for (Eigen::Index j = 0; j < p.size(i); ++j)
                    for (Eigen::Index k = 0; k < p.size(i); ++k)
                        raw(r, c) += x(p.offset(i) + j, r) * a_inv(j, k) * x(p.offset(i) + k, c) / s.gamma[i];
    }
    raw += ridge * raw.trace() / static_cast<double>(l) * Eigen::MatrixXd::Identity(l, l);
    const Eigen::MatrixXd oracle = raw / raw.norm();

    const Eigen::MatrixXd b = update_spatial_b(s, x, p, ridge);
    CHECK(max_abs_diff(b, oracle) < 1e-12);
    CHECK(std::abs(b.norm() - 1.0) < 1e-12);
    CHECK(linalg::asymmetry(b) < 1e-12);
    CHECK(linalg::min_eigenvalue(b) > 0.0);
}

TEST_CASE("update_spatial_b: all blocks pruned keeps the previous B")
{
    const BlockPartition p({2, 2});
    SolverState s = random_state(p, 4, 3, 3);
    s.active = {false, false};
    s.b = random_spd(3, 4);
    CHECK(update_spatial_b(s, random_matrix(4, 3, 5), p, 1e-6) == s.b);
}

// ---- posterior_moments ------------------------------------------------------

TEST_CASE("posterior_moments: identity system with unit prior")
{
    const Eigen::Index l = 3;
    const BlockPartition p({2, 2, 2});
    SolverState s = random_state(p, 6, l, 1);
    s.gamma.assign(3, 1.0);
    for (auto& a : s.a_blocks) a = Eigen::MatrixXd::Identity(2, 2);
    s.b = Eigen::MatrixXd::Identity(l, l) / std::sqrt(static_cast<double>(l));
    const MultichannelFrame y(random_matrix(6, l, 2));
    const auto mom = posterior_moments(y, Eigen::MatrixXd::Identity(6, 6), s, p, 0.0);
    CHECK(max_abs_diff(mom.mu, y.values() * std::pow(static_cast<double>(l), 0.25)) < 1e-12);
    for (const auto& sb : mom.sigma_blocks) CHECK(sb.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("posterior_moments: zero prior gives zero moments")
{
    const BlockPartition p({3, 3});
    SolverState s = random_state(p, 6, 2, 3);
    s.active = {false, false};
    const auto mom = posterior_moments(MultichannelFrame(random_matrix(4, 2, 4)), random_matrix(4, 6, 5), s, p, 0.0);
    CHECK(mom.mu.isZero(0.0));
    for (const auto& sb : mom.sigma_blocks) CHECK(sb.isZero(0.0));
}

TEST_CASE("posterior_moments: matches the dense formulas")
{
    const BlockPartition p({5, 5, 4, 6});
    const Eigen::Index l = 3;
    SolverState s = random_state(p, 20, l, 31);
    s.b = random_spd(l, 32);
    s.b /= s.b.norm();
    const Eigen::MatrixXd a = random_matrix(10, 20, 33);
    const MultichannelFrame y(random_matrix(10, l, 34));
    const double lambda = 1e-3;

    Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(20, 20);
    for (std::size_t i = 0; i < p.n_blocks(); ++i)
        pi.block(p.offset(i), p.offset(i), p.size(i), p.size(i)) = s.gamma[i] * s.a_blocks[i];
    const Eigen::MatrixXd h_inv = (lambda * Eigen::MatrixXd::Identity(10, 10) + a * pi * a.transpose()).fullPivLu().inverse();
    const Eigen::MatrixXd mu = pi * a.transpose() * h_inv * y.values() * testing::schur_sqrt(s.b).fullPivLu().inverse();
    const Eigen::MatrixXd sigma = pi - pi * a.transpose() * h_inv * a * pi;

    const auto mom = posterior_moments(y, a, s, p, lambda);
    CHECK(max_abs_diff(mom.mu, mu) < 1e-10);
    for (std::size_t i = 0; i < p.n_blocks(); ++i)
        CHECK(max_abs_diff(mom.sigma_blocks[i], sigma.block(p.offset(i), p.offset(i), p.size(i), p.size(i))) < 1e-10);
}

TEST_CASE("posterior_moments: singular system is reported")
{
    const BlockPartition p({2, 2});
    SolverState s = random_state(p, 4, 1, 5);
    Eigen::MatrixXd a = random_matrix(3, 4, 6);
    a.row(1).setZero();
    CHECK_THROWS_AS(posterior_moments(MultichannelFrame(random_matrix(3, 1, 7)), a, s, p, 0.0), SingularSystem);
}

// ---- update_gamma -----------------------------------------------------------

TEST_CASE("update_gamma: direct substitution and zero case")
{
    const BlockPartition p({1, 2});
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(3, 1);
    mu(0, 0) = 1.0;
    const std::vector<Eigen::MatrixXd> sigma = {Eigen::MatrixXd::Constant(1, 1, 0.5), Eigen::MatrixXd::Zero(2, 2)};
    const std::vector<Eigen::MatrixXd> a = {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(2, 2)};
    const auto g = update_gamma(mu, sigma, a, p, 1);
    CHECK(g[0] == Catch::Approx(1.5).epsilon(1e-15));
    CHECK(g[1] == 0.0);
}

TEST_CASE("update_gamma: matches an elementwise trace loop")
{
    const BlockPartition p({4, 4, 4});
    const Eigen::Index l = 3;
    const Eigen::MatrixXd mu = random_matrix(12, l, 41);
    std::vector<Eigen::MatrixXd> sigma;
    std::vector<Eigen::MatrixXd> a;
    for (std::uint64_t i = 0; i < 3; ++i) {
        sigma.push_back(random_spd(4, 50 + i));
        a.push_back(random_spd(4, 60 + i));
    }
    const auto g = update_gamma(mu, sigma, a, p, l);
    for (std::size_t i = 0; i < 3; ++i) {
        const Eigen::MatrixXd a_inv = a[i].fullPivLu().inverse();
        double acc = 0.0;
        for (Eigen::Index c = 0; c < l; ++c)
            for (Eigen::Index j = 0; j < 4; ++j)
                for (Eigen::Index k = 0; k < 4; ++k)
                    acc += a_inv(j, k) * (sigma[i](k, j) + mu(p.offset(i) + k, c) * mu(p.offset(i) + j, c));
        CHECK(std::abs(g[i] - acc / (3.0 * 4.0)) < 1e-12);
    }
}

// ---- update_a_blocks --------------------------------------------------------

TEST_CASE("update_a_blocks: free mode direct substitution")
{
    const BlockPartition p({2});
    const auto out = update_a_blocks(Eigen::MatrixXd::Zero(2, 1), {Eigen::MatrixXd::Identity(2, 2)}, {1.0},
                                     {Eigen::MatrixXd::Identity(2, 2)}, p, 1, AConstraint::free);
    CHECK(max_abs_diff(out.a_blocks[0], Eigen::MatrixXd::Identity(2, 2)) < 1e-15);
    CHECK_FALSE(out.pruned[0]);
}

TEST_CASE("update_a_blocks: AR(1)-consistent input survives the Toeplitz projection")
{
    const BlockPartition p({2});
    Eigen::MatrixXd raw(2, 2);
    raw << 1.0, 0.9, 0.9, 1.0;
    const auto out = update_a_blocks(Eigen::MatrixXd::Zero(2, 1), {raw}, {1.0}, {Eigen::MatrixXd::Identity(2, 2)}, p,
                                     1, AConstraint::toeplitz_ar1);
    CHECK(max_abs_diff(out.a_blocks[0], raw) < 1e-15);

    // Diagonal scaling is removed.
    const auto scaled = update_a_blocks(Eigen::MatrixXd::Zero(2, 1), {3.0 * raw}, {1.0},
                                        {Eigen::MatrixXd::Identity(2, 2)}, p, 1, AConstraint::toeplitz_ar1);
    CHECK(max_abs_diff(scaled.a_blocks[0], raw) < 1e-15);
}

TEST_CASE("update_a_blocks: Toeplitz coefficient is pooled and clamped")
{
    const BlockPartition p({3, 3});
    Eigen::MatrixXd hi(3, 3);
    hi << 1, 1, 1, 1, 1, 1, 1, 1, 1;  // ratio 1 -> clamped to 0.99
    Eigen::MatrixXd lo = Eigen::MatrixXd::Identity(3, 3);
    const auto out = update_a_blocks(Eigen::MatrixXd::Zero(6, 1), {hi, lo}, {1.0, 1.0},
                                     {Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(3, 3)}, p, 1,
                                     AConstraint::toeplitz_ar1);
    // Pooled: superdiagonal mean 0.5, diagonal mean 1.
    CHECK(max_abs_diff(out.a_blocks[0], linalg::ar1_toeplitz(3, 0.5)) < 1e-15);
    CHECK(max_abs_diff(out.a_blocks[1], linalg::ar1_toeplitz(3, 0.5)) < 1e-15);

    const auto clamped = update_a_blocks(Eigen::MatrixXd::Zero(3, 1), {hi}, {1.0}, {Eigen::MatrixXd::Identity(3, 3)},
                                         BlockPartition({3}), 1, AConstraint::toeplitz_ar1);
    CHECK(max_abs_diff(clamped.a_blocks[0], linalg::ar1_toeplitz(3, 0.99)) < 1e-15);
}

TEST_CASE("update_a_blocks: matches a per-channel loop in free mode")
{
    const BlockPartition p({5, 5});
    const Eigen::Index l = 4;
    const Eigen::MatrixXd mu = random_matrix(10, l, 71);
    const std::vector<Eigen::MatrixXd> sigma = {random_spd(5, 72), random_spd(5, 73)};
    const std::vector<double> gamma = {0.7, 1.9};
    const auto out = update_a_blocks(mu, sigma, gamma, {Eigen::MatrixXd::Identity(5, 5), Eigen::MatrixXd::Identity(5, 5)},
                                     p, l, AConstraint::free);
    for (std::size_t i = 0; i < 2; ++i) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(5, 5);
        for (Eigen::Index c = 0; c < l; ++c)
            for (Eigen::Index j = 0; j < 5; ++j)
                for (Eigen::Index k = 0; k < 5; ++k)
                    acc(j, k) += (sigma[i](j, k) + mu(p.offset(i) + j, c) * mu(p.offset(i) + k, c)) / gamma[i];
        CHECK(max_abs_diff(out.a_blocks[i], acc / static_cast<double>(l)) < 1e-12);
    }
}

TEST_CASE("update_a_blocks: blocks at or below the floor are pruned, not updated")
{
    const BlockPartition p({2, 2});
    const Eigen::MatrixXd prev = 7.0 * Eigen::MatrixXd::Identity(2, 2);
    const auto out = update_a_blocks(random_matrix(4, 1, 1), {random_spd(2, 2), random_spd(2, 3)}, {1e-9, 1.0},
                                     {prev, prev}, p, 1, AConstraint::free, 1e-6);
    CHECK(out.pruned[0]);
    CHECK_FALSE(out.pruned[1]);
    CHECK(out.a_blocks[0] == prev);
}

// ---- reconstruct ------------------------------------------------------------

TEST_CASE("reconstruct: identity and diagonal B")
{
    const Eigen::MatrixXd mu = random_matrix(6, 2, 1);
    CHECK(max_abs_diff(reconstruct(mu, Eigen::MatrixXd::Identity(2, 2)), mu) < 1e-15);

    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
    b(0, 0) = 4.0;
    b(1, 1) = 1.0;
    b /= b.norm();
    const Eigen::MatrixXd x = reconstruct(mu, b);
    CHECK(max_abs_diff(x.col(0), mu.col(0) * std::sqrt(b(0, 0))) < 1e-14);
    CHECK(max_abs_diff(x.col(1), mu.col(1) * std::sqrt(b(1, 1))) < 1e-14);
}

TEST_CASE("reconstruct: symmetric root agrees with the Schur root")
{
    Eigen::MatrixXd b = random_spd(5, 9);
    b /= b.norm();
    const Eigen::MatrixXd root = linalg::sqrtm(b);
    CHECK(max_abs_diff(root * root, b) < 1e-10);
    const Eigen::MatrixXd mu = random_matrix(30, 5, 10);
    CHECK(max_abs_diff(reconstruct(mu, b), mu * testing::schur_sqrt(b)) < 1e-10);
}

// ---- one full iteration against the dense oracle ----------------------------

TEST_CASE("stsbl_iteration: every update matches the dense oracle")
{
    const Eigen::Index m = 40;
    const Eigen::Index n = 20;
    const Eigen::Index l = 3;
    const BlockPartition p = BlockPartition::uniform(m, 5);
    for (double ridge : {0.0, 1e-6}) {
        SolverState s = random_state(p, m, l, 101);
        const Eigen::MatrixXd a = random_matrix(n, m, 102);
        const MultichannelFrame y(random_matrix(n, l, 103));
        const Eigen::MatrixXd x = random_matrix(m, l, 104);

        const auto oracle = testing::dense_iteration(y.values(), a, p.sizes(), s.gamma, s.a_blocks, x, 1e-10, ridge);

        SolverOptions opts;
        opts.constrain_a = AConstraint::free;
        opts.prune_gamma = 0.0;
        opts.b_ridge = ridge;
        const Eigen::MatrixXd x_next = stsbl_iteration(y, a, p, opts, s, x);

        CHECK(max_abs_diff(s.b, oracle.b) < 1e-10);
        CHECK(max_abs_diff(s.mu, oracle.mu) < 1e-10);
        for (std::size_t i = 0; i < p.n_blocks(); ++i) {
            CHECK(max_abs_diff(s.sigma_blocks[i], oracle.sigma.block(p.offset(i), p.offset(i), 5, 5)) < 1e-10);
            CHECK(std::abs(s.gamma[i] - oracle.gamma[i]) < 1e-10);
            CHECK(max_abs_diff(s.a_blocks[i], oracle.a_blocks[i]) < 1e-10);
        }
        CHECK(max_abs_diff(x_next, oracle.x) < 1e-10);
    }
}

// ---- solve ------------------------------------------------------------------

TEST_CASE("solve: invertible noiseless system returns Y")
{
    const MultichannelFrame y(random_matrix(30, 3, 5));
    const auto r = solve(y, Eigen::MatrixXd::Identity(30, 30), BlockPartition::uniform(30, 5), {});
    CHECK(rel_diff(r.x_hat.values(), y.values()) < 1e-6);
    CHECK(r.iterations <= 40);
}

TEST_CASE("solve: prior-exact instance is recovered")
{
    const Instance inst = prior_instance(1);
    const auto r = solve(inst.y, inst.a_eff, BlockPartition::uniform(256, 8), {});
    CHECK(nmse(r.x_hat, inst.gen.x) < 1e-3);
    CHECK(r.iterations <= 40);
    CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations));
    // Recovered support is a superset of the true active blocks.
    for (std::size_t i : inst.gen.truth.active) CHECK(r.final_state.active[i]);
}

TEST_CASE("solve: invariants hold after every iteration")
{
    const Instance inst = prior_instance(2);
    const BlockPartition p = BlockPartition::uniform(256, 8);
    std::vector<bool> was_pruned(p.n_blocks(), false);
    int calls = 0;
    const auto r = solve(inst.y, inst.a_eff, p, {}, [&](int, const SolverState& s, const Eigen::MatrixXd& x) {
        ++calls;
        REQUIRE(std::abs(s.b.norm() - 1.0) < 1e-12);
        REQUIRE(linalg::asymmetry(s.b) < 1e-12);
        for (std::size_t i = 0; i < p.n_blocks(); ++i) {
            REQUIRE(s.gamma[i] >= 0.0);
            if (s.active[i]) {
                REQUIRE(linalg::asymmetry(s.a_blocks[i]) < 1e-12);
                REQUIRE(linalg::min_eigenvalue(s.a_blocks[i]) > 0.0);
            }
            REQUIRE(linalg::asymmetry(s.sigma_blocks[i]) < 1e-8);
            REQUIRE(linalg::min_eigenvalue(s.sigma_blocks[i]) > -1e-8);
            if (was_pruned[i]) {
                REQUIRE(s.mu.middleRows(p.offset(i), p.size(i)).isZero(0.0));
                REQUIRE(x.middleRows(p.offset(i), p.size(i)).isZero(0.0));
                REQUIRE_FALSE(s.active[i]);
            }
            if (!s.active[i]) was_pruned[i] = true;
        }
    });
    CHECK(calls == r.iterations);
}

TEST_CASE("solve: DCT-domain recovery at the 45x500x30 operating point runs to completion")
{
    GeneratorSpec spec;
    spec.partition = BlockPartition::uniform(500, 25);
    spec.n_channels = 30;
    spec.active_count = 2;
    spec.temporal_corr = 0.8;
    spec.spatial_corr = 0.8;
    spec.seed = 3;
    const auto gen = generate(spec);
    const auto d = dct_dictionary(500);
    const auto x = synthesize(d, gen.x);
    const auto phi = make_sparse_binary(45, 500, 4);
    const auto r = solve(compress(phi, x), effective_matrix(phi, d), spec.partition, {});
    CHECK(r.iterations <= 40);
    CHECK(synthesize(d, r.x_hat).values().allFinite());
}

TEST_CASE("solve: L = 1 keeps B = [1] and matches the per-channel path")
{
    const Instance inst = prior_instance(3, 1);
    const BlockPartition p = BlockPartition::uniform(256, 8);
    const auto joint = solve(inst.y, inst.a_eff, p, {}, [](int, const SolverState& s, const Eigen::MatrixXd&) {
        REQUIRE(s.b.rows() == 1);
        REQUIRE(std::abs(s.b(0, 0) - 1.0) < 1e-15);
    });
    const auto separate = solve_per_channel(inst.y, inst.a_eff, p, {});
    CHECK(max_abs_diff(joint.x_hat.values(), separate.x_hat.values()) < 1e-10);
    CHECK(nmse(joint.x_hat, inst.gen.x) < 1e-3);
}

TEST_CASE("solve_per_channel: stacks one recovery per column")
{
    const Instance inst = prior_instance(4, 3);
    const BlockPartition p = BlockPartition::uniform(256, 8);
    const auto all = solve_per_channel(inst.y, inst.a_eff, p, {});
    for (Eigen::Index c = 0; c < 3; ++c) {
        const auto one = solve(MultichannelFrame(inst.y.values().col(c)), inst.a_eff, p, {});
        CHECK(max_abs_diff(all.x_hat.values().col(c), one.x_hat.values()) < 1e-15);
    }
}

TEST_CASE("joint recovery beats per-channel recovery under strong spatial correlation")
{
    // 50 paired trials, L = 4, spatial and temporal correlation 0.95.
    const BlockPartition p = BlockPartition::uniform(256, 8);
    int joint_wins = 0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        const Instance inst = prior_instance(500 + t, 4, 0.95);
        const double joint = nmse(solve(inst.y, inst.a_eff, p, {}).x_hat, inst.gen.x);
        const double separate = nmse(solve_per_channel(inst.y, inst.a_eff, p, {}).x_hat, inst.gen.x);
        joint_wins += joint <= separate;
    }
    INFO("joint wins " << joint_wins << " / 50");
    CHECK(joint_wins >= 40);
}

TEST_CASE("solve_per_channel is slower than the joint solve at L = 30")
{
    GeneratorSpec spec;
    spec.partition = BlockPartition::uniform(500, 25);
    spec.n_channels = 30;
    spec.active_count = 5;
    spec.temporal_corr = 0.9;
    spec.spatial_corr = 0.9;
    spec.seed = 11;
    const auto gen = generate(spec);
    const auto phi = make_sparse_binary(250, 500, 12);
    const Eigen::MatrixXd a = densify(phi);
    const auto y = compress(phi, gen.x);
    SolverOptions opts;
    opts.tolerance = 0.0;  // fixed 40 iterations on both sides

    const auto t0 = std::chrono::steady_clock::now();
    (void)solve(y, a, spec.partition, opts);
    const auto t1 = std::chrono::steady_clock::now();
    (void)solve_per_channel(y, a, spec.partition, opts);
    const auto t2 = std::chrono::steady_clock::now();
    CHECK((t1 - t0) < (t2 - t1));
}
