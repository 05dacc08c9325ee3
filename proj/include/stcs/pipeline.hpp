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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stcs/baselines.hpp"
#include "stcs/dictionary.hpp"
#include "stcs/error.hpp"
#include "stcs/frame.hpp"
#include "stcs/measurement.hpp"
#include "stcs/metrics.hpp"
#include "stcs/solver.hpp"
#include "stcs/synthgen.hpp"

namespace stcs {

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"stsbl", "stsbl-per-channel", "somp"};
  return names;
}

struct Recovery {
  MultichannelFrame x_hat;  // time domain
  int iterations = 0;
  bool converged = false;
  double runtime_seconds = 0.0;
};

struct RecoverySettings {
  std::string algorithm = "stsbl";
  Eigen::Index block = 25;
  SolverOptions solver;
  std::optional<SompOptions> somp;  // default: floor(N/2) atoms
  bool use_dictionary = false;
};

/// Recover X from Y = Phi X with the named algorithm. With a dictionary the
/// algorithm works on the DCT coefficients of X through Phi D.
inline Recovery recover(const MeasurementMatrix& phi, const MultichannelFrame& y, const RecoverySettings& settings) {
  const auto& names = algorithm_names();
  if (std::find(names.begin(), names.end(), settings.algorithm) == names.end()) {
    throw InvalidArgument("unknown algorithm '" + settings.algorithm + "' (expected stsbl, stsbl-per-channel or somp)");
  }
  if (y.n_samples() != phi.n_rows()) {
    throw InvalidDimension("measurements " + y.shape() + " do not match matrix " +
                           shape_string(phi.n_rows(), phi.n_cols()));
  }
  const Eigen::Index m = phi.n_cols();
  std::optional<Dictionary> dict;
  Eigen::MatrixXd a_eff;
  if (settings.use_dictionary) {
    dict = dct_dictionary(m);
    a_eff = effective_matrix(phi, *dict);
  } else {
    a_eff = densify(phi);
  }

  Recovery out;
  const auto start = std::chrono::steady_clock::now();
  MultichannelFrame coef;
  if (settings.algorithm == "somp") {
    const SompOptions opts = settings.somp.value_or(SompOptions::defaults_for(phi.n_rows()));
    SompResult r = somp(y, a_eff, opts);
    coef = std::move(r.x);
    out.iterations = static_cast<int>(r.support.size());
    out.converged = !r.rank_deficient;
  } else {
    const BlockPartition partition = BlockPartition::uniform(m, settings.block);
    RecoveryResult r = settings.algorithm == "stsbl" ? solve(y, a_eff, partition, settings.solver)
                                                     : solve_per_channel(y, a_eff, partition, settings.solver);
    coef = std::move(r.x_hat);
    out.iterations = r.iterations;
    out.converged = r.converged;
  }
  out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.x_hat = dict ? synthesize(*dict, coef) : std::move(coef);
  return out;
}

/// N for a target compression ratio at length M (rounded, at least 2).
inline Eigen::Index rows_for_ratio(Eigen::Index m, double cr_pct) {
  if (!(cr_pct >= 0.0) || !(cr_pct < 100.0)) throw InvalidArgument("compression ratio must lie in [0, 100)");
  const auto n = static_cast<Eigen::Index>(std::llround(static_cast<double>(m) * (1.0 - cr_pct / 100.0)));
  return std::clamp<Eigen::Index>(n, 2, m);
}

// ---- benchmark ------------------------------------------------------------

struct BenchConfig {
  Eigen::Index m = 500;
  Eigen::Index n_channels = 30;
  Eigen::Index block = 25;
  std::vector<double> cr_pct = {50, 70, 90};
  int trials = 1;
  std::vector<std::string> algorithms = {"stsbl", "stsbl-per-channel"};
  std::size_t active_blocks = 5;
  double temporal_corr = 0.9;
  double spatial_corr = 0.9;
  std::uint64_t seed = 1;
  int max_iterations = 40;
  bool use_dictionary = false;
  unsigned threads = 0;  // 0: STCS_THREADS or hardware concurrency

  static BenchConfig from_json(const nlohmann::json& j) {
    BenchConfig c;
    try {
      c.m = j.value("m", c.m);
      c.n_channels = j.value("l", c.n_channels);
      c.block = j.value("block", c.block);
      c.cr_pct = j.value("cr", c.cr_pct);
      c.trials = j.value("trials", c.trials);
      c.algorithms = j.value("algorithms", c.algorithms);
      c.active_blocks = j.value("active_blocks", c.active_blocks);
      c.temporal_corr = j.value("temporal_corr", c.temporal_corr);
      c.spatial_corr = j.value("spatial_corr", c.spatial_corr);
      c.seed = j.value("seed", c.seed);
      c.max_iterations = j.value("max_iterations", c.max_iterations);
      c.use_dictionary = j.value("dictionary", c.use_dictionary);
      c.threads = j.value("threads", c.threads);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument(std::string("malformed bench config: ") + e.what());
    }
    if (c.trials < 1) throw InvalidArgument("bench needs trials >= 1");
    if (c.cr_pct.empty() || c.algorithms.empty()) throw InvalidArgument("bench needs at least one CR and one algorithm");
    return c;
  }
};

struct TrialRecord {
  std::string algorithm;
  double cr_pct = 0.0;
  Eigen::Index n = 0;
  int trial = 0;
  bool ok = false;
  double runtime_seconds = 0.0;
  double nmse = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  std::string error;
};

struct BenchRow {
  std::string algorithm;
  double cr_pct = 0.0;
  Eigen::Index n = 0;
  int trials = 0;
  int failures = 0;
  double mean_runtime_seconds = 0.0;
  double mean_nmse = std::numeric_limits<double>::quiet_NaN();
};

struct BenchResult {
  std::vector<BenchRow> rows;  // algorithm-major, CR in config order
  std::vector<TrialRecord> trials;
};

inline unsigned bench_threads(unsigned requested) {
  unsigned threads = requested;
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("STCS_THREADS")) {
      const long cap = std::strtol(env, nullptr, 10);
      if (cap >= 1) threads = std::min(threads, static_cast<unsigned>(cap));
    }
  }
  return threads;
}

/// Every (CR, trial) pair gets its own generated frame and matrix; all
/// algorithms run on that same fixture. Failures are recorded, not thrown.
inline BenchResult run_bench(const BenchConfig& cfg) {
  for (const auto& a : cfg.algorithms) {
    const auto& names = algorithm_names();
    if (std::find(names.begin(), names.end(), a) == names.end()) throw InvalidArgument("unknown algorithm '" + a + "'");
  }
  const BlockPartition partition = BlockPartition::uniform(cfg.m, cfg.block);
  const std::size_t n_cr = cfg.cr_pct.size();
  const std::size_t n_alg = cfg.algorithms.size();
  const auto n_tasks = n_cr * static_cast<std::size_t>(cfg.trials);
  for (double cr : cfg.cr_pct) (void)rows_for_ratio(cfg.m, cr);

  std::vector<TrialRecord> records(n_tasks * n_alg);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      const std::size_t ci = task / static_cast<std::size_t>(cfg.trials);
      const int trial = static_cast<int>(task % static_cast<std::size_t>(cfg.trials));
      const Eigen::Index n = rows_for_ratio(cfg.m, cfg.cr_pct[ci]);
      const std::uint64_t trial_seed = cfg.seed + 7919 * static_cast<std::uint64_t>(trial);

      std::optional<GeneratedFrame> fixture;
      std::optional<MeasurementMatrix> phi;
      std::string setup_error;
      try {
        GeneratorSpec spec;
        spec.partition = partition;
        spec.n_channels = cfg.n_channels;
        spec.active_count = std::min(cfg.active_blocks, partition.n_blocks());
        spec.temporal_corr = cfg.temporal_corr;
        spec.spatial_corr = cfg.spatial_corr;
        spec.seed = trial_seed;
        fixture = generate(spec);
        if (cfg.use_dictionary) fixture->x = synthesize(dct_dictionary(cfg.m), fixture->x);
        phi = make_sparse_binary(n, cfg.m, trial_seed + 104729 * (ci + 1));
      } catch (const std::exception& e) {
        setup_error = e.what();
      }

      for (std::size_t ai = 0; ai < n_alg; ++ai) {
        TrialRecord& rec = records[task * n_alg + ai];
        rec.algorithm = cfg.algorithms[ai];
        rec.cr_pct = cfg.cr_pct[ci];
        rec.n = n;
        rec.trial = trial;
        if (!setup_error.empty()) {
          rec.error = setup_error;
          continue;
        }
        try {
          RecoverySettings settings;
          settings.algorithm = rec.algorithm;
          settings.block = cfg.block;
          settings.solver.max_iterations = cfg.max_iterations;
          settings.use_dictionary = cfg.use_dictionary;
          const MultichannelFrame y = compress(*phi, fixture->x);
          Recovery r = recover(*phi, y, settings);
          rec.runtime_seconds = r.runtime_seconds;
          rec.iterations = r.iterations;
          rec.nmse = nmse(r.x_hat, fixture->x);
          rec.ok = true;
        } catch (const std::exception& e) {
          rec.error = e.what();
        }
      }
    }
  };

  const unsigned threads = std::min<unsigned>(bench_threads(cfg.threads), static_cast<unsigned>(n_tasks));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  BenchResult result;
  for (std::size_t ai = 0; ai < n_alg; ++ai) {
    for (std::size_t ci = 0; ci < n_cr; ++ci) {
      BenchRow row;
      row.algorithm = cfg.algorithms[ai];
      row.cr_pct = cfg.cr_pct[ci];
      row.n = rows_for_ratio(cfg.m, row.cr_pct);
      double runtime = 0.0;
      double err = 0.0;
      for (int t = 0; t < cfg.trials; ++t) {
        const auto& rec = records[(ci * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t)) * n_alg + ai];
        ++row.trials;
        if (!rec.ok) {
          ++row.failures;
          continue;
        }
        runtime += rec.runtime_seconds;
        err += rec.nmse;
      }
      const int ok = row.trials - row.failures;
      if (ok > 0) {
        row.mean_runtime_seconds = runtime / ok;
        row.mean_nmse = err / ok;
      }
      result.rows.push_back(row);
    }
  }
  result.trials = std::move(records);
  return result;
}

inline void write_bench_csv(std::ostream& os, const BenchResult& result) {
  os << "algorithm,cr_pct,n,trials,failures,mean_runtime_s,mean_nmse\n";
  for (const auto& r : result.rows) {
    os << r.algorithm << ',' << r.cr_pct << ',' << r.n << ',' << r.trials << ',' << r.failures << ','
       << r.mean_runtime_seconds << ',';
    if (std::isfinite(r.mean_nmse)) os << r.mean_nmse;
    os << '\n';
  }
}

inline nlohmann::json trials_to_json(const BenchResult& result) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : result.trials) {
    nlohmann::json j = {{"algorithm", t.algorithm}, {"cr_pct", t.cr_pct}, {"n", t.n},
                        {"trial", t.trial},         {"ok", t.ok},         {"runtime_seconds", t.runtime_seconds},
                        {"iterations", t.iterations}};
    j["nmse"] = std::isfinite(t.nmse) ? nlohmann::json(t.nmse) : nlohmann::json(nullptr);
    if (!t.ok) j["error"] = t.error;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace stcs
