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

#include "vmc/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vmc/errors.hpp"
#include "vmc/estimators.hpp"
#include "vmc/matrix_io.hpp"
#include "vmc/preconditioners.hpp"

namespace vmc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(const fs::path &path, const json &j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

std::string energy_unit_note(const HamiltonianSpec &h) {
  return "# energies in units of J1 for S.S with S = sigma/2, multiplied by "
         "unit_scale=" +
         num(h.unit_scale);
}

// Exact data available when the sector fits under the ED cap.
struct ExactContext {
  std::optional<Sector> sector;
  std::optional<GroundStateResult> ground;
};

ExactContext make_exact_context(const RunConfig &cfg, const SpinHamiltonian &h) {
  ExactContext ctx;
  const int n = h.num_sites();
  if (sector_dimension(n, cfg.sampler.total_sz) <= cfg.ed_cap) {
    ctx.sector.emplace(n, cfg.sampler.total_sz, cfg.ed_cap);
    ctx.ground = ground_state(h, *ctx.sector);
  }
  return ctx;
}

std::optional<double> resolve_reference(const RunConfig &cfg,
                                        const ExactContext &ctx) {
  if (cfg.reference_energy) return cfg.reference_energy;
  if (ctx.ground) return ctx.ground->energy;
  const fs::path table = cfg.reference_table.empty()
                             ? default_reference_table()
                             : fs::path(cfg.reference_table);
  return lookup_reference_energy(cfg.hamiltonian, table);
}

class TraceWriter {
 public:
  TraceWriter(const fs::path &dir, const RunConfig &cfg,
              const ParameterPartition &partition, bool has_reference,
              bool has_infidelity)
      : trace_(dir / "trace.tsv"),
        timing_(dir / "timing.tsv"),
        has_reference_(has_reference),
        has_infidelity_(has_infidelity) {
    if (!trace_ || !timing_) throw IoError("cannot open trace files in " + dir.string());
    trace_ << energy_unit_note(cfg.hamiltonian) << '\n';
    trace_ << "epoch\tenergy_re\tenergy_im\tenergy_std_error\tenergy_variance";
    if (has_reference_) trace_ << "\trelative_error";
    if (has_infidelity_) trace_ << "\tinfidelity";
    trace_ << "\tacceptance\teta";
    for (const auto &l : partition.layers()) trace_ << "\tnorm_" << l.name;
    trace_ << '\n';
    timing_ << "# seconds\nepoch\twall\tsample\testimate\tsolve\n";
  }

  void write(const TraceRecord &r) {
    trace_ << r.epoch << '\t' << num(r.energy.real()) << '\t'
           << num(r.energy.imag()) << '\t' << num(r.energy_std_error) << '\t'
           << num(r.energy_variance);
    if (has_reference_) trace_ << '\t' << num(r.relative_error.value_or(0.0));
    if (has_infidelity_) trace_ << '\t' << num(r.infidelity.value_or(0.0));
    trace_ << '\t' << num(r.acceptance) << '\t' << num(r.eta);
    for (const auto &[name, norm] : r.layer_norms) trace_ << '\t' << num(norm);
    trace_ << '\n';
    trace_.flush();
    timing_ << r.epoch << '\t' << num(r.wall_seconds) << '\t'
            << num(r.sample_seconds) << '\t' << num(r.estimate_seconds) << '\t'
            << num(r.solve_seconds) << '\n';
    timing_.flush();
  }

 private:
  std::ofstream trace_;
  std::ofstream timing_;
  bool has_reference_;
  bool has_infidelity_;
};

std::vector<std::pair<std::string, double>> zero_norms(
    const ParameterPartition &p) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto &l : p.layers()) out.emplace_back(l.name, 0.0);
  return out;
}

void append_reports(const fs::path &path, const DiagnosticsReport &a,
                    const DiagnosticsReport &b) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(a).dump() << '\n' << to_json(b).dump() << '\n';
}

std::string sampling_name(SamplingMode m) {
  return m == SamplingMode::kExact ? "exact" : "mcmc";
}

}  // namespace

void write_checkpoint(const fs::path &path, const Checkpoint &c) {
  json chains = json::array();
  for (const auto &s : c.chains) {
    chains.push_back({{"config", s.config.to_string()},
                      {"proposed", s.proposed},
                      {"accepted", s.accepted}});
  }
  // nlohmann serializes doubles with round-trip precision.
  json j = {{"format", "vmc-checkpoint-1"},
            {"epoch", c.epoch},
            {"parameters", std::vector<double>(c.parameters.data(),
                                               c.parameters.data() +
                                                   c.parameters.size())},
            {"chains", chains}};
  const fs::path tmp = path.string() + ".tmp";
  write_json(tmp, j);
  fs::rename(tmp, path);
}

Checkpoint read_checkpoint(const fs::path &path) {
  const json j = read_json(path);
  try {
    if (j.at("format") != "vmc-checkpoint-1") {
      throw IoError(path.string() + " is not a checkpoint");
    }
    Checkpoint c;
    c.epoch = j.at("epoch").get<int>();
    const auto params = j.at("parameters").get<std::vector<double>>();
    c.parameters = Eigen::Map<const RealVector>(params.data(),
                                                static_cast<Index>(params.size()));
    for (const auto &s : j.at("chains")) {
      ChainState st;
      st.config = SpinConfiguration::parse(s.at("config").get<std::string>());
      st.proposed = s.at("proposed").get<std::uint64_t>();
      st.accepted = s.at("accepted").get<std::uint64_t>();
      c.chains.push_back(std::move(st));
    }
    return c;
  } catch (const json::exception &e) {
    throw IoError("malformed checkpoint " + path.string() + ": " + e.what());
  }
}

TrainResult train(const RunConfig &cfg, const std::optional<fs::path> &resume) {
  cfg.validate();
  const auto t_start = Clock::now();
  const fs::path dir = cfg.outputs.directory;
  fs::create_directories(dir / "checkpoints");
  write_json(dir / "resolved_config.json", to_json(cfg));

  const SpinHamiltonian h = build_hamiltonian(cfg.hamiltonian);
  auto psi = build_ansatz(cfg.ansatz, h.num_sites());
  const ParameterPartition &partition = psi->partition();

  const ExactContext exact = make_exact_context(cfg, h);
  std::optional<Sector> sample_sector;
  if (cfg.sampler.mode == SamplingMode::kExact) {
    sample_sector.emplace(h.num_sites(), cfg.sampler.total_sz,
                          cfg.sampler.exact_cap);
  }

  TrainResult result;
  result.output_dir = dir;
  if (exact.ground) result.ground_energy = exact.ground->energy;
  result.reference_energy = resolve_reference(cfg, exact);

  int start = 0;
  std::vector<ChainState> chains;
  if (resume) {
    Checkpoint c = read_checkpoint(*resume);
    psi->set_parameters(c.parameters);
    chains = std::move(c.chains);
    for (auto &s : chains) s.log_amp = psi->log_psi(s.config);
    start = c.epoch;
    if (start > cfg.schedule.epochs) {
      throw ConfigError("checkpoint epoch exceeds schedule.epochs");
    }
  }

  TraceWriter writer(dir, cfg, partition, result.reference_energy.has_value(),
                     exact.ground.has_value());
  const fs::path diag_path = dir / "diagnostics.jsonl";
  if (cfg.schedule.diagnostics_every > 0) fs::remove(diag_path);

  auto save = [&](const fs::path &path, int epoch) {
    write_checkpoint(path, {epoch, psi->parameters(), chains});
  };
  auto checkpoint_path = [&](int epoch) {
    return dir / "checkpoints" / ("checkpoint_" + std::to_string(epoch) + ".json");
  };

  for (int epoch = start; epoch <= cfg.schedule.epochs; ++epoch) {
    const auto t_epoch = Clock::now();
    const bool snapshot = cfg.schedule.snapshot_every > 0 &&
                          epoch % cfg.schedule.snapshot_every == 0;
    if (snapshot) save(checkpoint_path(epoch), epoch);

    TraceRecord rec;
    rec.epoch = epoch;
    try {
      auto t0 = Clock::now();
      SampleBatch batch =
          sample_sector
              ? sample_exact(*psi, h, *sample_sector, cfg.threads)
              : sample_mcmc(*psi, h, cfg.sampler, chains,
                            static_cast<std::uint32_t>(epoch), cfg.threads);
      rec.sample_seconds = seconds_since(t0);

      t0 = Clock::now();
      const EnergyEstimate e = energy(batch);
      rec.energy = e.mean;
      rec.energy_std_error = e.std_error;
      rec.energy_variance = e.variance;
      rec.acceptance = batch.acceptance;
      if (result.reference_energy) {
        rec.relative_error = std::abs(e.mean.real() - *result.reference_energy) /
                             std::abs(*result.reference_energy);
      }
      if (exact.ground) {
        rec.infidelity = infidelity(*psi, exact.ground->vector, *exact.sector);
      }

      if (epoch == cfg.schedule.epochs) {
        rec.estimate_seconds = seconds_since(t0);
        rec.layer_norms = zero_norms(partition);
        rec.wall_seconds = seconds_since(t_epoch);
        writer.write(rec);
        result.trace.push_back(std::move(rec));
        break;
      }

      const ForceVector f = force(batch);
      SolveConfig solve_cfg = cfg.solver;
      solve_cfg.eta = cfg.solver.eta_at(epoch);
      rec.eta = solve_cfg.eta;

      const bool want_diag = cfg.schedule.diagnostics_every > 0 &&
                             epoch % cfg.schedule.diagnostics_every == 0 &&
                             exact.sector.has_value();
      const bool want_matrix = snapshot && cfg.outputs.wants("matrix");

      UpdateVector update;
      double solve_seconds = 0.0;
      if (cfg.solver.strategy == Strategy::kNtk) {
        rec.estimate_seconds = seconds_since(t0);
        t0 = Clock::now();
        update = solve_ntk(batch, solve_cfg, partition);
        solve_seconds = seconds_since(t0);
      } else if (cfg.solver.strategy == Strategy::kFull) {
        const QgtMatrix s = qgt_full(batch, /*real_only=*/true, cfg.qgt_cap);
        rec.estimate_seconds = seconds_since(t0);
        t0 = Clock::now();
        update = solve_full(s, f, solve_cfg, partition);
        solve_seconds = seconds_since(t0);
      } else {
        const BlockQgt blocks = qgt_blocks(batch, partition, /*real_only=*/true);
        rec.estimate_seconds = seconds_since(t0);
        t0 = Clock::now();
        update = solve_block(blocks, f, partition, solve_cfg, cfg.threads);
        solve_seconds = seconds_since(t0);
      }
      rec.solve_seconds = solve_seconds;

      if (want_diag || want_matrix) {
        const QgtMatrix full = qgt_full(batch, false, cfg.qgt_cap);
        const BlockQgt blocks = qgt_blocks(batch, partition);
        if (want_matrix) {
          write_matrix(dir / ("qgt_full_" + std::to_string(epoch) + ".mat"),
                       full.entries);
          write_matrix(dir / ("qgt_block_" + std::to_string(epoch) + ".mat"),
                       blocks.assemble());
        }
        if (want_diag) {
          const QgtMatrix ex = exact_qgt(*psi, *exact.sector, cfg.threads);
          auto [rb, rf] = compare(blocks, full, ex, cfg.solver.lambda,
                                  cfg.solver.rcond, cfg.correlation);
          for (auto *r : {&rb, &rf}) {
            r->epoch = epoch;
            r->num_samples = batch.size();
            r->sampling = sampling_name(batch.mode);
          }
          append_reports(diag_path, rb, rf);
        }
      }

      if (!update.delta_theta.allFinite()) {
        throw SolverError("non-finite parameter update at epoch " +
                          std::to_string(epoch));
      }
      psi->set_parameters(psi->parameters() + update.delta_theta);
      rec.layer_norms = std::move(update.layer_norms);
    } catch (const VmcError &) {
      save(dir / "checkpoints" / "checkpoint_last_good.json", epoch);
      throw;
    }
    rec.wall_seconds = seconds_since(t_epoch);
    writer.write(rec);
    result.trace.push_back(std::move(rec));
  }

  result.final_checkpoint = dir / "checkpoints" / "checkpoint_final.json";
  save(result.final_checkpoint, cfg.schedule.epochs);
  result.parameters = psi->parameters();
  if (exact.sector) {
    const SampleBatch b = sample_exact(*psi, h, *exact.sector, cfg.threads);
    result.final_exact_energy = energy(b).mean.real();
    result.final_infidelity =
        infidelity(*psi, exact.ground->vector, *exact.sector);
  }
  result.wall_seconds = seconds_since(t_start);

  json summary = {{"epochs", cfg.schedule.epochs},
                  {"num_parameters", psi->num_parameters()},
                  {"strategy", to_string(cfg.solver.strategy)},
                  {"final_energy", result.trace.back().energy.real()},
                  {"final_energy_std_error", result.trace.back().energy_std_error},
                  {"final_energy_variance", result.trace.back().energy_variance},
                  {"wall_seconds", result.wall_seconds}};
  auto put = [&](const char *key, const std::optional<double> &v) {
    summary[key] = v ? json(*v) : json(nullptr);
  };
  put("ground_energy", result.ground_energy);
  put("reference_energy", result.reference_energy);
  put("final_exact_energy", result.final_exact_energy);
  put("final_infidelity", result.final_infidelity);
  if (result.reference_energy && result.final_exact_energy) {
    summary["final_exact_relative_error"] =
        std::abs(*result.final_exact_energy - *result.reference_energy) /
        std::abs(*result.reference_energy);
  }
  write_json(dir / "summary.json", summary);
  return result;
}

std::pair<DiagnosticsReport, DiagnosticsReport> diagnose(
    const RunConfig &cfg, const fs::path &checkpoint, const fs::path &out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  const SpinHamiltonian h = build_hamiltonian(cfg.hamiltonian);
  auto psi = build_ansatz(cfg.ansatz, h.num_sites());
  Checkpoint c = read_checkpoint(checkpoint);
  psi->set_parameters(c.parameters);

  const std::uint64_t dim = sector_dimension(h.num_sites(), cfg.sampler.total_sz);
  if (dim > cfg.ed_cap) {
    throw CapacityError("exact QGT unavailable: sector dimension " +
                        std::to_string(dim) + " exceeds ed_cap " +
                        std::to_string(cfg.ed_cap));
  }
  if (psi->num_parameters() > cfg.qgt_cap) {
    throw CapacityError("diagnostics need dense metrics, but Np = " +
                        std::to_string(psi->num_parameters()) +
                        " exceeds qgt_cap " + std::to_string(cfg.qgt_cap));
  }
  const Sector sector(h.num_sites(), cfg.sampler.total_sz, cfg.ed_cap);

  SampleBatch batch;
  if (cfg.sampler.mode == SamplingMode::kExact) {
    batch = sample_exact(*psi, h, sector, cfg.threads);
  } else {
    for (auto &s : c.chains) s.log_amp = psi->log_psi(s.config);
    batch = sample_mcmc(*psi, h, cfg.sampler, c.chains,
                        static_cast<std::uint32_t>(c.epoch), cfg.threads);
  }
  const QgtMatrix full = qgt_full(batch, false, cfg.qgt_cap);
  const BlockQgt blocks = qgt_blocks(batch, psi->partition());
  const QgtMatrix ex = exact_qgt(*psi, sector, cfg.threads);

  auto reports = compare(blocks, full, ex, cfg.solver.lambda, cfg.solver.rcond,
                         cfg.correlation);
  for (auto *r : {&reports.first, &reports.second}) {
    r->epoch = c.epoch;
    r->num_samples = batch.size();
    r->sampling = sampling_name(batch.mode);
  }
  const fs::path jsonl = out_dir / "diagnostics.jsonl";
  fs::remove(jsonl);
  append_reports(jsonl, reports.first, reports.second);
  {
    std::ofstream table(out_dir / "diagnostics_table.txt");
    table << "# epoch " << c.epoch << ", " << batch.size() << " "
          << sampling_name(batch.mode) << " samples, Np = "
          << psi->num_parameters() << '\n'
          << render_table(reports.first, reports.second);
  }
  if (cfg.outputs.wants("matrix")) {
    write_matrix(out_dir / "qgt_full.mat", full.entries);
    write_matrix(out_dir / "qgt_block.mat", blocks.assemble());
    write_matrix(out_dir / "qgt_exact.mat", ex.entries);
  }
  return reports;
}

GroundStateResult run_ed(const RunConfig &cfg, const fs::path &out_dir,
                         bool save_state) {
  cfg.validate();
  fs::create_directories(out_dir);
  const SpinHamiltonian h = build_hamiltonian(cfg.hamiltonian);
  const Sector sector(h.num_sites(), cfg.sampler.total_sz, cfg.ed_cap);
  const auto t0 = Clock::now();
  GroundStateResult gs = ground_state(h, sector);
  const double secs = seconds_since(t0);
  json j = {{"model", cfg.hamiltonian.model},
            {"size", cfg.hamiltonian.size_label()},
            {"j2_over_j1", cfg.hamiltonian.j2_over_j1},
            {"unit_scale", cfg.hamiltonian.unit_scale},
            {"sign_rule", cfg.hamiltonian.sign_rule},
            {"total_sz", cfg.sampler.total_sz},
            {"dimension", sector.dimension()},
            {"energy", gs.energy},
            {"energy_per_site", gs.energy / h.num_sites()},
            {"method", gs.method},
            {"iterations", gs.iterations},
            {"residual", gs.residual},
            {"wall_seconds", secs}};
  if (save_state) {
    write_matrix(out_dir / "state.mat", ComplexMatrix(gs.vector));
    j["state_file"] = "state.mat";
  }
  write_json(out_dir / "ed.json", j);
  return gs;
}

std::vector<ComparisonRow> compare_strategies(const json &sweep,
                                              const fs::path &out_dir) {
  if (!sweep.contains("base") || !sweep.contains("runs") ||
      !sweep.at("runs").is_array()) {
    throw ConfigError("sweep needs a 'base' config and a 'runs' array");
  }
  const RunConfig base = parse_config(sweep.at("base"));
  fs::create_directories(out_dir);
  std::vector<ComparisonRow> rows;
  std::ofstream plot(out_dir / "plot_data.tsv");
  plot << "label\tstrategy\tsamples\tepoch\tenergy\trelative_error\n";

  int index = 0;
  for (const auto &run : sweep.at("runs")) {
    ComparisonRow row;
    row.label = run.value("label", "run" + std::to_string(index));
    ++index;
    try {
      json patch = run.value("overrides", json::object());
      patch["outputs"]["directory"] = (out_dir / row.label).string();
      const RunConfig cfg = with_overrides(base, patch);
      row.strategy = to_string(cfg.solver.strategy);
      row.samples = cfg.sampler.mode == SamplingMode::kExact
                        ? 0
                        : cfg.sampler.n_samples;
      const TrainResult r = train(cfg);
      row.final_energy = r.trace.back().energy.real();
      row.final_exact_energy = r.final_exact_energy;
      row.reference_energy = r.reference_energy;
      if (r.reference_energy) {
        const double e = r.final_exact_energy.value_or(row.final_energy);
        row.relative_error =
            std::abs(e - *r.reference_energy) / std::abs(*r.reference_energy);
      }
      row.wall_seconds = r.wall_seconds;
      for (const auto &t : r.trace) {
        plot << row.label << '\t' << row.strategy << '\t' << row.samples << '\t'
             << t.epoch << '\t' << num(t.energy.real()) << '\t'
             << (t.relative_error ? num(*t.relative_error) : "NA") << '\n';
      }
    } catch (const std::exception &e) {
      row.status = std::string("error: ") + e.what();
    }
    rows.push_back(std::move(row));
  }

  std::ofstream table(out_dir / "comparison.tsv");
  table << "label\tstrategy\tsamples\tstatus\tfinal_energy\tfinal_exact_energy"
           "\treference_energy\trelative_error\twall_seconds\n";
  auto opt = [](const std::optional<double> &v) {
    return v ? num(*v) : std::string("NA");
  };
  for (const auto &r : rows) {
    std::string status = r.status;
    for (char &ch : status) {
      if (ch == '\t' || ch == '\n') ch = ' ';
    }
    table << r.label << '\t' << r.strategy << '\t' << r.samples << '\t'
          << status << '\t' << num(r.final_energy) << '\t'
          << opt(r.final_exact_energy) << '\t' << opt(r.reference_energy)
          << '\t' << opt(r.relative_error) << '\t' << num(r.wall_seconds)
          << '\n';
  }
  return rows;
}

}  // namespace vmc
