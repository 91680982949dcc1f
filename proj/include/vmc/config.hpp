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

#ifndef VMC_CONFIG_HPP
#define VMC_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vmc/ansatz.hpp"
#include "vmc/diagnostics.hpp"
#include "vmc/hamiltonian.hpp"
#include "vmc/preconditioners.hpp"
#include "vmc/sampler.hpp"

namespace vmc {

struct HamiltonianSpec {
  std::string model = "heisenberg_chain";  // or "j1j2_square"
  int length = 0;                          // chain length L
  int lx = 0;
  int ly = 0;
  bool periodic = true;
  double j1 = 1.0;
  double j2_over_j1 = 0.0;
  double unit_scale = 1.0;
  bool sign_rule = false;

  int num_sites() const;
  // "L16" or "4x4".
  std::string size_label() const;
};

struct AnsatzSpec {
  std::string model = "mlp";  // "mlp" or "rbm"
  int hidden = 8;
  int encoders = 1;
  std::uint64_t seed = 0;
};

struct ScheduleSpec {
  int epochs = 100;
  int diagnostics_every = 0;  // 0 disables periodic diagnostics
  int snapshot_every = 0;     // 0 disables intermediate checkpoints
};

struct OutputSpec {
  std::string directory = "run";
  // "trace" is always written; "matrix" adds QGT snapshots.
  std::vector<std::string> formats = {"trace"};

  bool wants(const std::string &format) const;
};

struct RunConfig {
  HamiltonianSpec hamiltonian;
  AnsatzSpec ansatz;
  SamplerConfig sampler;
  SolveConfig solver;
  ScheduleSpec schedule;
  OutputSpec outputs;
  int threads = 1;
  // Exact diagonalization and infidelities are computed when the sector fits.
  std::uint64_t ed_cap = std::uint64_t{1} << 20;
  Index qgt_cap = kDefaultQgtCap;
  Correlation correlation = Correlation::kPearson;
  // Energy used for relative errors when exact diagonalization is not run.
  std::optional<double> reference_energy;
  std::string reference_table;  // path; empty selects the bundled table

  void validate() const;
};

// Missing optional fields take their defaults; ansatz.seed and
// sampler.rng_seed are mandatory. Throws ConfigError.
RunConfig parse_config(const nlohmann::json &j);
RunConfig load_config(const std::filesystem::path &path);
nlohmann::json to_json(const RunConfig &cfg);

// Applies a JSON merge patch, used by strategy sweeps.
RunConfig with_overrides(const RunConfig &base, const nlohmann::json &patch);

SpinHamiltonian build_hamiltonian(const HamiltonianSpec &spec);
std::unique_ptr<Ansatz> build_ansatz(const AnsatzSpec &spec, int num_sites);

// Looks up (model, size, j2/j1) in a tab-separated reference table and
// rescales the stored energy to the requested unit_scale.
std::optional<double> lookup_reference_energy(
    const HamiltonianSpec &spec, const std::filesystem::path &table);
std::filesystem::path default_reference_table();

}  // namespace vmc

#endif  // VMC_CONFIG_HPP
