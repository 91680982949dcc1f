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

#ifndef VMC_SAMPLER_HPP
#define VMC_SAMPLER_HPP

#include <cstdint>
#include <vector>

#include "vmc/ansatz.hpp"
#include "vmc/hamiltonian.hpp"
#include "vmc/hilbert.hpp"
#include "vmc/rng.hpp"
#include "vmc/types.hpp"

namespace vmc {

enum class SamplingMode { kMcmc, kExact };

struct SamplerConfig {
  SamplingMode mode = SamplingMode::kMcmc;
  Index n_samples = 1024;
  int n_chains = 16;
  int burn_in = 100;  // sweeps discarded at the start of every epoch
  int thin = 1;       // sweeps between recorded samples
  std::uint64_t rng_seed = 0;
  int total_sz = 0;  // spin sum of the sampled sector
  std::uint64_t exact_cap = std::uint64_t{1} << 20;

  // Throws ConfigError.
  void validate() const;
};

struct ChainState {
  SpinConfiguration config;
  Complex log_amp;
  std::uint64_t proposed = 0;
  std::uint64_t accepted = 0;
};

// Born-distribution samples together with everything the estimators need.
struct SampleBatch {
  SamplingMode mode = SamplingMode::kMcmc;
  std::vector<SpinConfiguration> configs;
  ComplexVector log_amps;
  RealVector weights;  // sums to 1
  ComplexVector local_energies;
  ComplexMatrix delta_O;  // Ns x Np, weighted column means zero
  double acceptance = 1.0;

  Index size() const { return static_cast<Index>(configs.size()); }
  Index num_parameters() const { return delta_O.cols(); }
};

// One sweep = num_sites exchange proposals. Each proposal swaps a uniformly
// chosen up spin with a uniformly chosen down spin and is accepted with
// probability min(1, |psi(x')/psi(x)|^2).
ChainState metropolis_sweep(const Ansatz &psi, ChainState state,
                            CounterRng &rng);

// Uniformly random sector configuration for chain `chain`.
ChainState initial_chain(const Ansatz &psi, const SamplerConfig &cfg,
                         std::uint32_t chain);

// Markov-chain sampling for one epoch. Chains are created on first use and
// carried over between epochs; chain c draws from stream (seed, c, epoch).
SampleBatch sample_mcmc(const Ansatz &psi, const SpinHamiltonian &h,
                        const SamplerConfig &cfg,
                        std::vector<ChainState> &chains, std::uint32_t epoch,
                        int threads = 1);

// Exact Born weights over a whole sector.
SampleBatch sample_exact(const Ansatz &psi, const SpinHamiltonian &h,
                         const Sector &sector, int threads = 1);
// Exact weights and centered log-derivatives only; local_energies is empty.
SampleBatch sample_exact(const Ansatz &psi, const Sector &sector,
                         int threads = 1);

// Dispatches on cfg.mode; MCMC starts from fresh chains at epoch 0.
SampleBatch sample(const Ansatz &psi, const SpinHamiltonian &h,
                   const SamplerConfig &cfg, int threads = 1);

// Normalized Born weights |psi|^2 / sum |psi|^2 from log-amplitudes.
RealVector born_weights(const ComplexVector &log_amps);

}  // namespace vmc

#endif  // VMC_SAMPLER_HPP
