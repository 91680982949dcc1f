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

#ifndef VMC_RUNNER_HPP
#define VMC_RUNNER_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vmc/config.hpp"
#include "vmc/diagnostics.hpp"
#include "vmc/exact.hpp"
#include "vmc/sampler.hpp"

namespace vmc {

// One row of trace.tsv. Timings are kept out of the trace file (they go to
// timing.tsv) so that traces are bit-reproducible.
struct TraceRecord {
  int epoch = 0;
  Complex energy;
  double energy_std_error = 0.0;
  double energy_variance = 0.0;
  std::optional<double> relative_error;
  std::optional<double> infidelity;
  double acceptance = 0.0;
  double eta = 0.0;
  std::vector<std::pair<std::string, double>> layer_norms;

  double wall_seconds = 0.0;
  double sample_seconds = 0.0;
  double estimate_seconds = 0.0;
  double solve_seconds = 0.0;
};

// Parameters after `epoch` updates plus the Markov chains that will seed the
// next epoch's sampling.
struct Checkpoint {
  int epoch = 0;
  RealVector parameters;
  std::vector<ChainState> chains;
};

void write_checkpoint(const std::filesystem::path &path, const Checkpoint &c);
Checkpoint read_checkpoint(const std::filesystem::path &path);

struct TrainResult {
  std::vector<TraceRecord> trace;
  RealVector parameters;
  std::filesystem::path output_dir;
  std::filesystem::path final_checkpoint;
  std::optional<double> ground_energy;     // exact E0 when the sector fits
  std::optional<double> reference_energy;  // E0, configured or tabulated
  std::optional<double> final_exact_energy;
  std::optional<double> final_infidelity;
  double wall_seconds = 0.0;
};

// Epoch loop: sample -> estimate -> solve -> update. Writes into
// cfg.outputs.directory: resolved_config.json, trace.tsv, timing.tsv,
// checkpoints/, summary.json and, when enabled, diagnostics.jsonl and
// matrix snapshots. With `resume`, continues from a checkpoint.
TrainResult train(const RunConfig &cfg,
                  const std::optional<std::filesystem::path> &resume = {});

// Sampled full and block metrics at a checkpoint against the exact metric.
// Writes diagnostics.jsonl and diagnostics_table.txt into out_dir.
std::pair<DiagnosticsReport, DiagnosticsReport> diagnose(
    const RunConfig &cfg, const std::filesystem::path &checkpoint,
    const std::filesystem::path &out_dir);

// Exact ground state; writes ed.json (and state.mat with save_state).
GroundStateResult run_ed(const RunConfig &cfg,
                         const std::filesystem::path &out_dir,
                         bool save_state = false);

struct ComparisonRow {
  std::string label;
  std::string strategy;
  Index samples = 0;
  std::string status = "ok";  // or the error message
  double final_energy = 0.0;  // last sampled estimate
  std::optional<double> final_exact_energy;
  std::optional<double> reference_energy;
  std::optional<double> relative_error;
  double wall_seconds = 0.0;
};

// Sweep file: {"base": <run config>, "runs": [{"label": ..., "overrides":
// <merge patch>}, ...]}. Each run trains into out_dir/<label>; failures are
// recorded and the sweep continues. Writes comparison.tsv and plot_data.tsv.
std::vector<ComparisonRow> compare_strategies(
    const nlohmann::json &sweep, const std::filesystem::path &out_dir);

}  // namespace vmc

#endif  // VMC_RUNNER_HPP
