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

// stcs command-line front end: gen-matrix, synth, compress, recover, bench,
// effective-matrix.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "stcs/stcs.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

stcs::MeasurementMatrix load_any_matrix(const std::string& path) {
  return ends_with(path, ".csv") ? stcs::io::load_matrix_csv(path) : stcs::io::load_matrix(path);
}

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

struct GenMatrixArgs {
  Eigen::Index n = 45;
  Eigen::Index m = 500;
  std::optional<double> cr;
  std::uint64_t seed = 1;
  std::string out;
  std::string csv;
};

int cmd_gen_matrix(const GenMatrixArgs& a) {
  const Eigen::Index n = a.cr ? stcs::rows_for_ratio(a.m, *a.cr) : a.n;
  const auto phi = stcs::make_sparse_binary(n, a.m, a.seed);
  stcs::io::save_matrix(a.out, phi);
  if (!a.csv.empty()) stcs::io::save_matrix_csv(a.csv, stcs::densify(phi), stcs::io::matrix_metadata(phi));
  std::cout << "wrote " << n << "x" << a.m << " sparse binary matrix (seed " << a.seed << ", " << stcs::Rng::kName
            << ") to " << a.out << "\n"
            << "CR = " << fixed1(stcs::compression_ratio(a.m, n)) << "%\n";
  return 0;
}

struct SynthArgs {
  Eigen::Index m = 256;
  Eigen::Index l = 4;
  Eigen::Index block = 8;
  std::size_t active = 4;
  double temporal_corr = 0.9;
  double spatial_corr = 0.9;
  double gamma_low = 1.0;
  double gamma_high = 1.0;
  std::uint64_t seed = 1;
  bool dct = false;
  std::string out;
  std::string truth;
};

int cmd_synth(const SynthArgs& a) {
  stcs::GeneratorSpec spec;
  spec.partition = stcs::BlockPartition::uniform(a.m, a.block);
  spec.n_channels = a.l;
  spec.active_count = a.active;
  spec.temporal_corr = a.temporal_corr;
  spec.spatial_corr = a.spatial_corr;
  spec.gamma_low = a.gamma_low;
  spec.gamma_high = a.gamma_high;
  spec.seed = a.seed;
  auto gen = stcs::generate(spec);
  stcs::MultichannelFrame x = a.dct ? stcs::synthesize(stcs::dct_dictionary(a.m), gen.x) : gen.x;
  auto meta = stcs::io::frame_metadata(x);
  meta.emplace_back("seed", std::to_string(a.seed));
  meta.emplace_back("dictionary", a.dct ? "1" : "0");
  stcs::io::save_frame(a.out, x, meta);
  if (!a.truth.empty()) {
    auto os = stcs::io::open_out(a.truth);
    auto j = stcs::io::to_json(spec, gen.truth);
    j["dictionary"] = a.dct;
    os << j.dump(2) << '\n';
    stcs::io::close_checked(os, a.truth);
  }
  std::cout << "wrote " << x.shape() << " frame with " << gen.truth.active.size() << " active blocks to " << a.out
            << "\n";
  return 0;
}

struct CompressArgs {
  std::string matrix;
  std::string in;
  std::string out;
  bool dct = false;
};

int cmd_compress(const CompressArgs& a) {
  const auto phi = load_any_matrix(a.matrix);
  const auto x = stcs::io::load_frame(a.in);
  if (phi.n_cols() != x.frame.n_samples()) {
    throw stcs::InvalidDimension("matrix " + a.matrix + " is " + stcs::shape_string(phi.n_rows(), phi.n_cols()) +
                                 " but frame " + a.in + " is " + x.frame.shape());
  }
  const auto y = stcs::compress(phi, x.frame);
  std::string dict = stcs::io::lookup(x.meta, "dictionary", "0");
  if (a.dct) dict = "1";
  stcs::io::save_frame(a.out, y,
                       {{"M", std::to_string(phi.n_cols())},
                        {"N", std::to_string(phi.n_rows())},
                        {"L", std::to_string(y.n_channels())},
                        {"seed", std::to_string(phi.seed())},
                        {"dictionary", dict}});
  std::cout << "compressed " << x.frame.shape() << " -> " << y.shape() << " (CR "
            << fixed1(stcs::compression_ratio(phi.n_cols(), phi.n_rows())) << "%)\n";
  return 0;
}

struct RecoverArgs {
  std::string matrix;
  std::string in;
  std::string out;
  std::string report;
  std::string truth;
  stcs::RecoverySettings settings;
  std::string a_constraint = "toeplitz-ar1";
  std::optional<Eigen::Index> somp_atoms;
  double somp_tol = 1e-6;
  std::optional<bool> dct;
};

int cmd_recover(RecoverArgs a) {
  const auto phi = load_any_matrix(a.matrix);
  const auto y = stcs::io::load_frame(a.in);
  if (a.a_constraint == "free") {
    a.settings.solver.constrain_a = stcs::AConstraint::free;
  } else if (a.a_constraint == "toeplitz-ar1") {
    a.settings.solver.constrain_a = stcs::AConstraint::toeplitz_ar1;
  } else {
    throw stcs::InvalidArgument("unknown --a-constraint '" + a.a_constraint + "'");
  }
  if (a.somp_atoms) a.settings.somp = stcs::SompOptions{*a.somp_atoms, a.somp_tol};
  a.settings.use_dictionary = a.dct.value_or(stcs::io::lookup(y.meta, "dictionary", "0") == "1");

  const stcs::Recovery r = stcs::recover(phi, y.frame, a.settings);
  auto meta = stcs::io::frame_metadata(r.x_hat);
  meta.emplace_back("algorithm", a.settings.algorithm);
  meta.emplace_back("dictionary", a.settings.use_dictionary ? "1" : "0");
  stcs::io::save_frame(a.out, r.x_hat, meta);

  stcs::Report report;
  report.algorithm = a.settings.algorithm;
  report.seed = phi.seed();
  report.iterations = r.iterations;
  report.runtime_seconds = r.runtime_seconds;
  report.compression_ratio_pct = stcs::compression_ratio(phi.n_cols(), phi.n_rows());
  report.nmse = std::numeric_limits<double>::quiet_NaN();
  report.pearson_mean = std::numeric_limits<double>::quiet_NaN();
  if (!a.truth.empty()) {
    const auto truth = stcs::io::load_frame(a.truth);
    report.nmse = stcs::nmse(r.x_hat, truth.frame);
    report.pearson_per_channel.clear();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < truth.frame.n_channels(); ++c) {
      const auto rows = static_cast<std::size_t>(truth.frame.n_samples());
      double p = std::numeric_limits<double>::quiet_NaN();
      try {
        p = stcs::pearson({r.x_hat.values().col(c).data(), rows}, {truth.frame.values().col(c).data(), rows});
      } catch (const stcs::UndefinedMetric&) {
      }
      report.pearson_per_channel.push_back(p);
      sum += p;
    }
    report.pearson_mean = sum / static_cast<double>(truth.frame.n_channels());
  }
  nlohmann::json j = stcs::io::to_json(report);
  j["converged"] = r.converged;
  j["dictionary"] = a.settings.use_dictionary;
  j["rng"] = std::string(stcs::Rng::kName);
  if (!a.report.empty()) {
    auto os = stcs::io::open_out(a.report);
    os << j.dump(2) << '\n';
    stcs::io::close_checked(os, a.report);
  }
  std::cout << j.dump() << '\n';
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string out;
  std::string trials_out;
};

int cmd_bench(const BenchArgs& a) {
  const auto cfg = stcs::BenchConfig::from_json(stcs::io::load_json(a.config));
  const auto result = stcs::run_bench(cfg);
  auto os = stcs::io::open_out(a.out);
  stcs::write_bench_csv(os, result);
  stcs::io::close_checked(os, a.out);
  if (!a.trials_out.empty()) {
    auto ts = stcs::io::open_out(a.trials_out);
    ts << stcs::trials_to_json(result).dump(2) << '\n';
    stcs::io::close_checked(ts, a.trials_out);
  }
  stcs::write_bench_csv(std::cout, result);
  return 0;
}

int cmd_effective_matrix(const std::string& matrix, const std::string& out) {
  const auto phi = load_any_matrix(matrix);
  const auto a = stcs::effective_matrix(phi, stcs::dct_dictionary(phi.n_cols()));
  auto meta = stcs::io::matrix_metadata(phi);
  meta.emplace_back("dictionary", "dct");
  stcs::io::save_matrix_csv(out, a, meta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stcs: compressed sensing of multichannel correlated signals"};
  app.require_subcommand(1);

  GenMatrixArgs gm;
  auto* gen_matrix = app.add_subcommand("gen-matrix", "Generate a sparse binary measurement matrix (JSON)");
  gen_matrix->add_option("--n", gm.n, "Rows N (measurements)");
  gen_matrix->add_option("--m", gm.m, "Columns M (frame length)");
  gen_matrix->add_option("--cr", gm.cr, "Target compression ratio in percent; overrides --n");
  gen_matrix->add_option("--seed", gm.seed, "RNG seed");
  gen_matrix->add_option("--out", gm.out, "Output JSON path")->required();
  gen_matrix->add_option("--csv", gm.csv, "Also write the dense matrix as CSV");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Sample a block-sparse frame from the spatio-temporal prior");
  synth->add_option("--m", sa.m, "Samples per frame");
  synth->add_option("--l", sa.l, "Channels");
  synth->add_option("--block", sa.block, "Block size");
  synth->add_option("--active", sa.active, "Number of nonzero blocks");
  synth->add_option("--temporal-corr", sa.temporal_corr, "AR(1) coefficient within a block");
  synth->add_option("--spatial-corr", sa.spatial_corr, "AR(1) coefficient across channels");
  synth->add_option("--gamma-low", sa.gamma_low);
  synth->add_option("--gamma-high", sa.gamma_high);
  synth->add_option("--seed", sa.seed);
  synth->add_flag("--dct", sa.dct, "Treat the sample as DCT coefficients and write the time-domain frame");
  synth->add_option("--out", sa.out, "Output CSV")->required();
  synth->add_option("--truth", sa.truth, "Output JSON with the generating hyperparameters");

  CompressArgs ca;
  auto* compress = app.add_subcommand("compress", "Compute Y = Phi X");
  compress->add_option("--matrix", ca.matrix, "Measurement matrix (.json or dense .csv)")->required();
  compress->add_option("--in", ca.in, "Input frame CSV")->required();
  compress->add_option("--out", ca.out, "Output CSV")->required();
  compress->add_flag("--dct", ca.dct, "Mark Y for recovery in the DCT domain");

  RecoverArgs ra;
  auto* recover = app.add_subcommand("recover", "Recover X from Y");
  recover->add_option("--matrix", ra.matrix, "Measurement matrix (.json or dense .csv)")->required();
  recover->add_option("--in", ra.in, "Compressed frame CSV")->required();
  recover->add_option("--out", ra.out, "Recovered frame CSV")->required();
  recover->add_option("--report", ra.report, "Report JSON path");
  recover->add_option("--truth", ra.truth, "Ground-truth frame CSV for NMSE / Pearson");
  recover->add_option("--algo", ra.settings.algorithm, "stsbl | stsbl-per-channel | somp")
      ->check(CLI::IsMember({"stsbl", "stsbl-per-channel", "somp"}));
  recover->add_option("--block", ra.settings.block, "Block size; the last block absorbs any remainder");
  recover->add_option("--max-iterations", ra.settings.solver.max_iterations);
  recover->add_option("--tolerance", ra.settings.solver.tolerance);
  recover->add_option("--lambda", ra.settings.solver.lambda);
  recover->add_option("--prune-gamma", ra.settings.solver.prune_gamma);
  recover->add_option("--b-ridge", ra.settings.solver.b_ridge);
  recover->add_option("--a-constraint", ra.a_constraint, "free | toeplitz-ar1");
  recover->add_option("--somp-atoms", ra.somp_atoms, "SOMP atom budget (default floor(N/2))");
  recover->add_option("--somp-tol", ra.somp_tol, "SOMP relative residual tolerance");
  recover->add_flag("--dct,!--no-dct", ra.dct, "Recover in the DCT domain (default: from the Y header)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Runtime / NMSE sweep over compression ratios");
  bench->add_option("--config", ba.config, "Bench config JSON")->required();
  bench->add_option("--out", ba.out, "Output table CSV")->required();
  bench->add_option("--trials-out", ba.trials_out, "Per-trial JSON");

  std::string em_matrix;
  std::string em_out;
  auto* effective = app.add_subcommand("effective-matrix", "Export Phi D (DCT) as CSV");
  effective->add_option("--matrix", em_matrix)->required();
  effective->add_option("--out", em_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*gen_matrix) return cmd_gen_matrix(gm);
    if (*synth) return cmd_synth(sa);
    if (*compress) return cmd_compress(ca);
    if (*recover) return cmd_recover(ra);
    if (*bench) return cmd_bench(ba);
    if (*effective) return cmd_effective_matrix(em_matrix, em_out);
  } catch (const stcs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == stcs::Error::Kind::numerical ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
