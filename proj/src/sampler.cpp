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

#include "vmc/sampler.hpp"

#include <cmath>

#include "vmc/errors.hpp"
#include "vmc/parallel.hpp"

namespace vmc {

void SamplerConfig::validate() const {
  if (mode == SamplingMode::kMcmc) {
    if (n_samples <= 0 || n_chains <= 0) {
      throw ConfigError("n_samples and n_chains must be positive");
    }
    if (n_samples % n_chains != 0) {
      throw ConfigError("n_samples (" + std::to_string(n_samples) +
                        ") must be divisible by n_chains (" +
                        std::to_string(n_chains) + ")");
    }
    if (burn_in < 0 || thin < 1) {
      throw ConfigError("burn_in must be >= 0 and thin >= 1");
    }
  }
}

ChainState metropolis_sweep(const Ansatz &psi, ChainState state,
                            CounterRng &rng) {
  const int n = state.config.size();
  std::vector<int> ups, downs;
  ups.reserve(static_cast<std::size_t>(n));
  downs.reserve(static_cast<std::size_t>(n));
  for (int step = 0; step < n; ++step) {
    ups.clear();
    downs.clear();
    for (int i = 0; i < n; ++i) {
      (state.config[i] > 0 ? ups : downs).push_back(i);
    }
    if (ups.empty() || downs.empty()) return state;
    const int i = ups[rng.below(static_cast<std::uint32_t>(ups.size()))];
    const int j = downs[rng.below(static_cast<std::uint32_t>(downs.size()))];
    SpinConfiguration proposal = state.config.exchanged(i, j);
    const Complex log_amp = psi.log_psi(proposal);
    const double log_ratio = 2.0 * (log_amp.real() - state.log_amp.real());
    const double u = rng.uniform();
    ++state.proposed;
    if (log_ratio >= 0.0 || u < std::exp(log_ratio)) {
      state.config = std::move(proposal);
      state.log_amp = log_amp;
      ++state.accepted;
    }
  }
  return state;
}

ChainState initial_chain(const Ansatz &psi, const SamplerConfig &cfg,
                         std::uint32_t chain) {
  const int n = psi.num_sites();
  sector_dimension(n, cfg.total_sz);  // validates the sector
  const int ups = (n + cfg.total_sz) / 2;
  std::vector<std::int8_t> spins(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < ups; ++i) spins[static_cast<std::size_t>(i)] = 1;
  CounterRng rng(cfg.rng_seed, chain, 0, StreamPurpose::kChainInit);
  for (int i = n - 1; i > 0; --i) {
    const auto j = rng.below(static_cast<std::uint32_t>(i + 1));
    std::swap(spins[static_cast<std::size_t>(i)], spins[j]);
  }
  ChainState state;
  state.config = SpinConfiguration(std::move(spins));
  state.log_amp = psi.log_psi(state.config);
  if (!(state.log_amp.real() > kLogAmplitudeFloor)) {
    throw DegenerateAmplitudeError("initial chain configuration " +
                                   state.config.to_string() +
                                   " has vanishing amplitude");
  }
  return state;
}

RealVector born_weights(const ComplexVector &log_amps) {
  const double shift = log_amps.real().maxCoeff();
  RealVector w =
      (2.0 * (log_amps.real().array() - shift)).exp().matrix();
  const double total = w.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegenerateStateError("Born weights do not normalize");
  }
  return w / total;
}

namespace {

// Fills local energies, log-derivatives and centers them with the weights.
template <typename NeighbourLogAmp>
void finish_batch(SampleBatch &batch, const Ansatz &psi,
                  const SpinHamiltonian *h, int threads,
                  NeighbourLogAmp &&neighbour_log_amp) {
  const auto ns = static_cast<std::size_t>(batch.size());
  const Index np = psi.num_parameters();
  batch.local_energies.resize(h ? batch.size() : 0);
  batch.delta_O.resize(batch.size(), np);

  parallel_for(ns, threads, [&](std::size_t k) {
    const auto &x = batch.configs[k];
    batch.delta_O.row(static_cast<Index>(k)) =
        psi.log_derivatives(x).transpose();
    if (!h) return;
    // Configurations with zero Born weight (exact mode) never enter an
    // average, and their amplitude ratios may not be representable.
    if (batch.weights[static_cast<Index>(k)] == 0.0) {
      batch.local_energies[static_cast<Index>(k)] = 0.0;
      return;
    }
    const Complex lx = batch.log_amps[static_cast<Index>(k)];
    if (!std::isfinite(lx.real())) {
      throw DegenerateAmplitudeError("psi(x) vanishes at configuration " +
                                     x.to_string());
    }
    Complex e = 0.0;
    for (const auto &el : h->connected(x)) {
      if (el.config == x) {
        e += el.amplitude;
      } else {
        e += el.amplitude * std::exp(neighbour_log_amp(el.config) - lx);
      }
    }
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
      throw DegenerateAmplitudeError("local energy diverges at configuration " +
                                     x.to_string());
    }
    batch.local_energies[static_cast<Index>(k)] = e;
  });

  const ComplexVector mean =
      batch.delta_O.transpose() * batch.weights.cast<Complex>();
  batch.delta_O.rowwise() -= mean.transpose();
}

}  // namespace

SampleBatch sample_mcmc(const Ansatz &psi, const SpinHamiltonian &h,
                        const SamplerConfig &cfg,
                        std::vector<ChainState> &chains, std::uint32_t epoch,
                        int threads) {
  cfg.validate();
  if (h.num_sites() != psi.num_sites()) {
    throw InvalidArgumentError("ansatz and Hamiltonian site counts differ");
  }
  const auto n_chains = static_cast<std::size_t>(cfg.n_chains);
  if (chains.empty()) {
    chains.resize(n_chains);
    parallel_for(n_chains, threads, [&](std::size_t c) {
      chains[c] = initial_chain(psi, cfg, static_cast<std::uint32_t>(c));
    });
  } else if (chains.size() != n_chains) {
    throw InvalidArgumentError("chain count does not match sampler config");
  } else {
    // Parameters changed since the last epoch.
    parallel_for(n_chains, threads, [&](std::size_t c) {
      chains[c].log_amp = psi.log_psi(chains[c].config);
    });
  }

  const auto per_chain = static_cast<std::size_t>(cfg.n_samples / cfg.n_chains);
  SampleBatch batch;
  batch.mode = SamplingMode::kMcmc;
  batch.configs.resize(n_chains * per_chain);
  batch.log_amps.resize(static_cast<Index>(n_chains * per_chain));
  std::vector<std::uint64_t> proposed(n_chains), accepted(n_chains);

  parallel_for(n_chains, threads, [&](std::size_t c) {
    CounterRng rng(cfg.rng_seed, static_cast<std::uint32_t>(c), epoch,
                   StreamPurpose::kSweep);
    ChainState state = chains[c];
    const auto p0 = state.proposed;
    const auto a0 = state.accepted;
    for (int s = 0; s < cfg.burn_in; ++s) {
      state = metropolis_sweep(psi, std::move(state), rng);
    }
    for (std::size_t r = 0; r < per_chain; ++r) {
      for (int s = 0; s < cfg.thin; ++s) {
        state = metropolis_sweep(psi, std::move(state), rng);
      }
      const std::size_t slot = c * per_chain + r;
      batch.configs[slot] = state.config;
      batch.log_amps[static_cast<Index>(slot)] = state.log_amp;
    }
    proposed[c] = state.proposed - p0;
    accepted[c] = state.accepted - a0;
    chains[c] = std::move(state);
  });

  std::uint64_t total_proposed = 0, total_accepted = 0;
  for (std::size_t c = 0; c < n_chains; ++c) {
    total_proposed += proposed[c];
    total_accepted += accepted[c];
  }
  batch.acceptance = total_proposed == 0
                         ? 0.0
                         : double(total_accepted) / double(total_proposed);
  batch.weights = RealVector::Constant(batch.size(), 1.0 / double(batch.size()));
  finish_batch(batch, psi, &h, threads,
               [&](const SpinConfiguration &y) { return psi.log_psi(y); });
  return batch;
}

namespace {

SampleBatch exact_batch(const Ansatz &psi, const SpinHamiltonian *h,
                        const Sector &sector, int threads) {
  if (sector.num_sites() != psi.num_sites() ||
      (h && h->num_sites() != psi.num_sites())) {
    throw InvalidArgumentError("sector, ansatz and Hamiltonian site counts differ");
  }
  SampleBatch batch;
  batch.mode = SamplingMode::kExact;
  batch.configs = sector.configurations();
  batch.log_amps.resize(batch.size());
  parallel_for(sector.dimension(), threads, [&](std::size_t k) {
    batch.log_amps[static_cast<Index>(k)] = psi.log_psi(batch.configs[k]);
  });
  batch.weights = born_weights(batch.log_amps);
  batch.acceptance = 1.0;
  finish_batch(batch, psi, h, threads, [&](const SpinConfiguration &y) {
    const auto pos = sector.position(encode(y));
    if (!pos) {
      throw InvalidSectorError("Hamiltonian leaves the magnetization sector");
    }
    return batch.log_amps[static_cast<Index>(*pos)];
  });
  return batch;
}

}  // namespace

SampleBatch sample_exact(const Ansatz &psi, const SpinHamiltonian &h,
                         const Sector &sector, int threads) {
  return exact_batch(psi, &h, sector, threads);
}

SampleBatch sample_exact(const Ansatz &psi, const Sector &sector,
                         int threads) {
  return exact_batch(psi, nullptr, sector, threads);
}

SampleBatch sample(const Ansatz &psi, const SpinHamiltonian &h,
                   const SamplerConfig &cfg, int threads) {
  if (cfg.mode == SamplingMode::kExact) {
    const Sector sector(psi.num_sites(), cfg.total_sz, cfg.exact_cap);
    return sample_exact(psi, h, sector, threads);
  }
  std::vector<ChainState> chains;
  return sample_mcmc(psi, h, cfg, chains, 0, threads);
}

}  // namespace vmc
