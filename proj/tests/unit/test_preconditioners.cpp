// Copyright 2026 The vmc Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "vmc/ansatz.hpp"
#include "vmc/errors.hpp"
#include "vmc/estimators.hpp"
#include "vmc/hamiltonian.hpp"
#include "vmc/preconditioners.hpp"
#include "vmc/sampler.hpp"

using namespace vmc;

namespace {

SpinHamiltonian chain(int l) {
  return SpinHamiltonian(LatticeGeometry::chain(l), 1.0, 0.0);
}

RealVector random_vector(Index n, double scale, std::uint64_t seed) {
  CounterRng rng(seed, 0, 0, StreamPurpose::kTest);
  RealVector t(n);
  for (Index k = 0; k < n; ++k) t[k] = scale * rng.normal();
  return t;
}

RealMatrix random_psd(Index n, Index rank, std::uint64_t seed) {
  const RealVector g = random_vector(n * rank, 1.0, seed);
  const RealMatrix a = Eigen::Map<const RealMatrix>(g.data(), n, rank);
  return a * a.transpose();
}

SolveConfig config(Strategy s, double eta, double lambda, double rcond) {
  SolveConfig c;
  c.strategy = s;
  c.eta = eta;
  c.lambda = lambda;
  c.rcond = rcond;
  return c;
}

SampleBatch mcmc_batch(const Ansatz &psi, Index samples, std::uint64_t seed) {
  SamplerConfig c;
  c.n_samples = samples;
  c.n_chains = 4;
  c.burn_in = 20;
  c.rng_seed = seed;
  std::vector<ChainState> chains;
  return sample_mcmc(psi, chain(psi.num_sites()), c, chains, 0);
}

double rel_diff(const RealVector &a, const RealVector &b) {
  return (a - b).norm() / b.norm();
}

}  // namespace

TEST_CASE("solve config") {
  CHECK(parse_strategy("full") == Strategy::kFull);
  CHECK(parse_strategy("block") == Strategy::kBlock);
  CHECK(parse_strategy("ntk") == Strategy::kNtk);
  CHECK(to_string(Strategy::kNtk) == "ntk");
  CHECK_THROWS_AS(parse_strategy("kfac"), ConfigError);
  SolveConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.eta == 0.01);
  CHECK(c.lambda == 1e-4);
  CHECK(c.rcond == 1e-12);
  c.lambda = 0.0;
  c.rcond = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.rcond = 1e-8;
  CHECK_NOTHROW(c.validate());
  c.eta = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.eta = 0.01;
  c.layer_lambda["embedding"] = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.layer_lambda["embedding"] = 0.5;
  CHECK(c.lambda_for("embedding") == 0.5);
  CHECK(c.lambda_for("output") == 0.0);
}

TEST_CASE("learning-rate warm-up") {
  SolveConfig c;
  c.eta = 0.02;
  CHECK(c.eta_at(0) == 0.02);
  c.warmup_epochs = 50;
  CHECK(c.eta_at(0) == doctest::Approx(0.02 / 50));
  CHECK(c.eta_at(24) == doctest::Approx(0.01));
  CHECK(c.eta_at(49) == 0.02);
  CHECK(c.eta_at(500) == 0.02);
}

TEST_CASE("identity metric gives plain gradient descent") {
  const RealVector f = random_vector(5, 1.0, 1);
  const QgtMatrix s{ComplexMatrix::Identity(5, 5)};
  const auto u = solve_full(s, f, config(Strategy::kFull, 0.3, 0.0, 1e-12));
  CHECK((u.delta_theta + 0.3 * f).norm() < 1e-15);
  REQUIRE(u.layer_norms.size() == 1);
  CHECK(u.layer_norms[0].second == doctest::Approx(0.3 * f.norm()));
}

TEST_CASE("pseudo-inverse discards the null direction") {
  QgtMatrix s{ComplexMatrix::Zero(2, 2)};
  s.entries(0, 0) = 2.0;
  RealVector f(2);
  f << 2.0, 1.0;
  const auto u = solve_full(s, f, config(Strategy::kFull, 0.1, 0.0, 1e-6));
  CHECK(std::abs(u.delta_theta[0] + 0.1) < 1e-15);
  CHECK(u.delta_theta[1] == 0.0);
}

TEST_CASE("shifted solve residual on a random PSD matrix") {
  const RealMatrix s = random_psd(8, 5, 2);
  const RealVector f = random_vector(8, 1.0, 3);
  const double eta = 0.05;
  const auto u = solve_full(QgtMatrix{s.cast<Complex>()}, f,
                            config(Strategy::kFull, eta, 1e-3, 1e-14));
  const RealMatrix shifted = s + 1e-3 * RealMatrix::Identity(8, 8);
  CHECK((shifted * (u.delta_theta / -eta) - f).norm() < 1e-8);
}

TEST_CASE("solver uses the real part of the metric") {
  ComplexMatrix s = random_psd(4, 4, 4).cast<Complex>();
  ComplexMatrix anti = random_psd(4, 4, 5).cast<Complex>();
  s += Complex(0, 1) * (anti - anti.transpose());  // Hermitian imaginary part
  const RealVector f = random_vector(4, 1.0, 6);
  const auto cfg = config(Strategy::kFull, 0.1, 1e-3, 1e-12);
  CHECK(solve_full(QgtMatrix{s}, f, cfg).delta_theta ==
        solve_full(QgtMatrix{s.real().cast<Complex>()}, f, cfg).delta_theta);
}

TEST_CASE("single-layer block solve equals the full solve") {
  MlpAnsatz psi(8, 4, 1);
  psi.set_parameters(random_vector(psi.num_parameters(), 0.3, 7));
  const auto b = mcmc_batch(psi, 96, 1);
  const auto one = ParameterPartition::single("all", psi.num_parameters());
  const auto cfg = config(Strategy::kBlock, 0.01, 1e-4, 1e-12);
  const RealVector f = force(b);
  const auto full = solve_full(qgt_full(b, true), f, cfg, one);
  const auto block = solve_block(qgt_blocks(b, one, true), f, one, cfg);
  CHECK((full.delta_theta - block.delta_theta).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("block solve on a block-diagonal metric equals the full solve") {
  const auto part = ParameterPartition::from_lengths({{"a", 3}, {"b", 5}, {"c", 2}});
  BlockQgt blocks;
  Index seed = 10;
  for (const auto &l : part.layers()) {
    blocks.blocks.push_back({l.name, random_psd(l.length, 2, ++seed).cast<Complex>()});
  }
  const RealVector f = random_vector(10, 1.0, 20);
  const auto cfg = config(Strategy::kBlock, 0.02, 1e-2, 1e-12);
  const auto u = solve_block(blocks, f, part, cfg);
  const auto v = solve_full(QgtMatrix{blocks.assemble()}, f, cfg, part);
  CHECK((u.delta_theta - v.delta_theta).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE(u.layer_norms.size() == 3);
  CHECK(u.layer_norms[1].first == "b");
  CHECK(u.layer_norms[1].second == doctest::Approx(u.delta_theta.segment(3, 5).norm()));
  CHECK(solve_block(blocks, f, part, cfg, 3).delta_theta == u.delta_theta);
}

TEST_CASE("two 2x2 blocks solved by hand") {
  // [[2,1],[1,2]] + 0.1 I has inverse [[2.1,-1],[-1,2.1]] / 3.41;
  // [[1,0],[0,3]] + 0.1 I has inverse diag(1/1.1, 1/3.1).
  const auto part = ParameterPartition::from_lengths({{"x", 2}, {"y", 2}});
  BlockQgt blocks;
  ComplexMatrix a(2, 2), b(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  b << 1.0, 0.0, 0.0, 3.0;
  blocks.blocks = {{"x", a}, {"y", b}};
  RealVector f(4);
  f << 1.0, -1.0, 2.0, 3.0;
  const auto u = solve_block(blocks, f, part, config(Strategy::kBlock, 0.5, 0.1, 1e-12));
  RealVector expect(4);
  expect << -0.5 * (2.1 + 1.0) / 3.41, -0.5 * (-1.0 - 2.1) / 3.41, -0.5 * 2.0 / 1.1,
      -0.5 * 3.0 / 3.1;
  CHECK((u.delta_theta - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("per-layer shift override") {
  const auto part = ParameterPartition::from_lengths({{"x", 2}, {"y", 2}});
  BlockQgt blocks;
  blocks.blocks = {{"x", random_psd(2, 1, 30).cast<Complex>()},
                   {"y", random_psd(2, 1, 31).cast<Complex>()}};
  const RealVector f = random_vector(4, 1.0, 32);
  auto cfg = config(Strategy::kBlock, 0.1, 1e-3, 1e-12);
  cfg.layer_lambda["y"] = 0.5;
  const auto u = solve_block(blocks, f, part, cfg);
  const RealVector y = -0.1 * shifted_pinv_solve(blocks.blocks[1].entries.real(), f.tail(2), 0.5, 1e-12);
  const RealVector x = -0.1 * shifted_pinv_solve(blocks.blocks[0].entries.real(), f.head(2), 1e-3, 1e-12);
  CHECK(u.delta_theta.tail(2) == y);
  CHECK(u.delta_theta.head(2) == x);
}

TEST_CASE("misaligned blocks are rejected") {
  const auto part = ParameterPartition::from_lengths({{"x", 2}, {"y", 2}});
  BlockQgt blocks;
  blocks.blocks = {{"y", ComplexMatrix::Identity(2, 2)}, {"x", ComplexMatrix::Identity(2, 2)}};
  const auto cfg = config(Strategy::kBlock, 0.1, 1e-3, 1e-12);
  CHECK_THROWS_AS(solve_block(blocks, RealVector::Ones(4), part, cfg), InvalidArgumentError);
  blocks.blocks.pop_back();
  CHECK_THROWS_AS(solve_block(blocks, RealVector::Ones(4), part, cfg), InvalidArgumentError);
  CHECK_THROWS_AS(solve_full(QgtMatrix{ComplexMatrix::Identity(3, 3)}, RealVector::Ones(4), cfg),
                  InvalidArgumentError);
}

TEST_CASE("NTK solve equals the full solve") {
  MlpAnsatz psi(8, 4, 1);
  psi.set_parameters(random_vector(psi.num_parameters(), 0.3, 40));
  const auto one = ParameterPartition::single("all", psi.num_parameters());
  // Ns below and above Np.
  for (Index ns : {32, 256}) {
    const auto b = mcmc_batch(psi, ns, ns);
    for (double lambda : {1e-2, 1e-4}) {
      const auto cfg = config(Strategy::kNtk, 0.01, lambda, 1e-14);
      const auto full = solve_full(qgt_full(b, true), force(b), cfg, one);
      const auto dual = solve_ntk(b, cfg, one);
      INFO("Ns = " << ns << ", lambda = " << lambda);
      CHECK(rel_diff(dual.delta_theta, full.delta_theta) < 1e-6);
    }
  }
  SUBCASE("full-rank Jacobian, vanishing shift") {
    LinearAnsatz lin(8);
    lin.set_parameters(random_vector(16, 0.3, 41));
    const auto b = mcmc_batch(lin, 400, 3);
    const auto part = ParameterPartition::single("all", 16);
    // Only 14 of the 16 real directions are visible in the sector (sum s = 0).
    const auto full = solve_full(qgt_full(b, true), force(b), config(Strategy::kFull, 0.01, 1e-12, 1e-10), part);
    const auto dual = solve_ntk(b, config(Strategy::kNtk, 0.01, 1e-12, 1e-10), part);
    CHECK(rel_diff(dual.delta_theta, full.delta_theta) < 1e-6);
  }
}

TEST_CASE("NTK toy with two samples and three parameters") {
  // Rows a and -a with a = (1, 2, 0), weights 1/2, centered energies (1, -1):
  // T has the single nonzero eigenvalue |a|^2 along the energy vector, so
  // delta = -2 eta a / (|a|^2 + lambda).
  SampleBatch b;
  b.mode = SamplingMode::kMcmc;
  b.configs = {SpinConfiguration{1, -1}, SpinConfiguration{-1, 1}};
  b.log_amps = ComplexVector::Zero(2);
  b.weights = RealVector::Constant(2, 0.5);
  b.local_energies.resize(2);
  b.local_energies << 1.0, -1.0;
  b.delta_O.resize(2, 3);
  b.delta_O << 1.0, 2.0, 0.0, -1.0, -2.0, 0.0;
  const auto part = ParameterPartition::single("all", 3);
  const auto u = solve_ntk(b, config(Strategy::kNtk, 0.1, 0.1, 1e-12), part);
  RealVector expect(3);
  expect << 1.0, 2.0, 0.0;
  expect *= -0.2 / 5.1;
  CHECK((u.delta_theta - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("eigenstate gives a zero update") {
  MlpAnsatz psi(4, 4, 1);  // constant amplitude: an eigenstate of the chain
  const auto b = sample_exact(psi, chain(4), Sector(4, 0));
  const auto part = psi.partition();
  const auto cfg = config(Strategy::kNtk, 0.01, 1e-4, 1e-12);
  CHECK(solve_ntk(b, cfg, part).delta_theta.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(solve_full(qgt_full(b, true), force(b), cfg, part).delta_theta.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("raising the cutoff never lengthens the update") {
  const RealMatrix s = random_psd(12, 12, 50) + random_psd(12, 2, 51) * 1e4;
  const RealVector f = random_vector(12, 1.0, 52);
  double last = INFINITY;
  for (double rcond : {0.0, 1e-12, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1, 0.5}) {
    const double n = shifted_pinv_solve(s, f, 1e-6, rcond).norm();
    CHECK(n <= last);
    last = n;
  }
}

TEST_CASE("a full-metric step lowers the exact energy") {
  const auto h = chain(8);
  const Sector sector(8, 0);
  for (double scale : {0.0, 0.1}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      MlpAnsatz psi(8, 8, 1);
      psi.initialize(seed);
      if (scale > 0) psi.set_parameters(random_vector(psi.num_parameters(), scale, seed));
      const auto b = sample_exact(psi, h, sector);
      const double e0 = energy(b).mean.real();
      const auto u = solve_full(qgt_full(b, true), force(b), config(Strategy::kFull, 1e-2, 1e-4, 1e-12));
      psi.set_parameters(psi.parameters() + u.delta_theta);
      const double e1 = energy(sample_exact(psi, h, sector)).mean.real();
      INFO("seed " << seed << " scale " << scale << ": " << e0 << " -> " << e1);
      CHECK(e1 < e0);
    }
  }
}
