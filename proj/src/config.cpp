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

#include "vmc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vmc/errors.hpp"

#ifndef VMC_DATA_DIR
#define VMC_DATA_DIR "data"
#endif

namespace vmc {

using nlohmann::json;

int HamiltonianSpec::num_sites() const {
  return model == "heisenberg_chain" ? length : lx * ly;
}

std::string HamiltonianSpec::size_label() const {
  if (model == "heisenberg_chain") return "L" + std::to_string(length);
  return std::to_string(lx) + "x" + std::to_string(ly);
}

bool OutputSpec::wants(const std::string &format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void RunConfig::validate() const {
  if (hamiltonian.model == "heisenberg_chain") {
    if (hamiltonian.length < 2) throw ConfigError("hamiltonian.L must be >= 2");
  } else if (hamiltonian.model == "j1j2_square") {
    if (hamiltonian.lx < 2 || hamiltonian.ly < 2) {
      throw ConfigError("hamiltonian.Lx and Ly must be >= 2");
    }
  } else {
    throw ConfigError("unknown hamiltonian.model '" + hamiltonian.model + "'");
  }
  if (!(hamiltonian.unit_scale > 0.0)) {
    throw ConfigError("hamiltonian.unit_scale must be positive");
  }
  if (ansatz.model != "mlp" && ansatz.model != "rbm") {
    throw ConfigError("unknown ansatz.model '" + ansatz.model + "'");
  }
  if (ansatz.hidden < 1 || ansatz.encoders < 0) {
    throw ConfigError("ansatz.hidden must be >= 1 and encoders >= 0");
  }
  sampler.validate();
  solver.validate();
  if (schedule.epochs < 0 || schedule.diagnostics_every < 0 ||
      schedule.snapshot_every < 0) {
    throw ConfigError("schedule entries must be nonnegative");
  }
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

namespace {

template <typename T>
void read_opt(const json &obj, const char *key, T &out) {
  if (obj.contains(key) && !obj.at(key).is_null()) obj.at(key).get_to(out);
}

const json &section(const json &j, const char *key) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) {
    throw ConfigError(std::string("section '") + key + "' must be an object");
  }
  return j.at(key);
}

std::string mode_name(SamplingMode m) {
  return m == SamplingMode::kExact ? "exact" : "mcmc";
}

}  // namespace

RunConfig parse_config(const json &j) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  RunConfig cfg;
  try {
    const json &h = section(j, "hamiltonian");
    read_opt(h, "model", cfg.hamiltonian.model);
    read_opt(h, "L", cfg.hamiltonian.length);
    read_opt(h, "Lx", cfg.hamiltonian.lx);
    read_opt(h, "Ly", cfg.hamiltonian.ly);
    read_opt(h, "periodic", cfg.hamiltonian.periodic);
    read_opt(h, "j1", cfg.hamiltonian.j1);
    read_opt(h, "j2_over_j1", cfg.hamiltonian.j2_over_j1);
    read_opt(h, "unit_scale", cfg.hamiltonian.unit_scale);
    read_opt(h, "sign_rule", cfg.hamiltonian.sign_rule);
    if (cfg.hamiltonian.model == "j1j2_square" && h.contains("L") &&
        !h.contains("Lx")) {
      cfg.hamiltonian.lx = cfg.hamiltonian.ly = cfg.hamiltonian.length;
    }

    const json &a = section(j, "ansatz");
    read_opt(a, "model", cfg.ansatz.model);
    read_opt(a, "hidden", cfg.ansatz.hidden);
    read_opt(a, "encoders", cfg.ansatz.encoders);
    if (!a.contains("seed")) throw ConfigError("ansatz.seed is mandatory");
    a.at("seed").get_to(cfg.ansatz.seed);

    const json &s = section(j, "sampler");
    std::string mode = "mcmc";
    read_opt(s, "mode", mode);
    if (mode == "mcmc") {
      cfg.sampler.mode = SamplingMode::kMcmc;
    } else if (mode == "exact") {
      cfg.sampler.mode = SamplingMode::kExact;
    } else {
      throw ConfigError("unknown sampler.mode '" + mode + "'");
    }
    read_opt(s, "n_samples", cfg.sampler.n_samples);
    read_opt(s, "n_chains", cfg.sampler.n_chains);
    read_opt(s, "burn_in", cfg.sampler.burn_in);
    read_opt(s, "thin", cfg.sampler.thin);
    read_opt(s, "total_sz", cfg.sampler.total_sz);
    read_opt(s, "exact_cap", cfg.sampler.exact_cap);
    if (!s.contains("rng_seed")) throw ConfigError("sampler.rng_seed is mandatory");
    s.at("rng_seed").get_to(cfg.sampler.rng_seed);

    const json &v = section(j, "solver");
    std::string strategy = "block";
    read_opt(v, "strategy", strategy);
    cfg.solver.strategy = parse_strategy(strategy);
    read_opt(v, "eta", cfg.solver.eta);
    read_opt(v, "lambda", cfg.solver.lambda);
    read_opt(v, "rcond", cfg.solver.rcond);
    read_opt(v, "warmup_epochs", cfg.solver.warmup_epochs);
    if (v.contains("layer_lambda")) {
      cfg.solver.layer_lambda =
          v.at("layer_lambda").get<std::map<std::string, double>>();
    }

    const json &sc = section(j, "schedule");
    read_opt(sc, "epochs", cfg.schedule.epochs);
    read_opt(sc, "diagnostics_every", cfg.schedule.diagnostics_every);
    read_opt(sc, "snapshot_every", cfg.schedule.snapshot_every);

    const json &o = section(j, "outputs");
    read_opt(o, "directory", cfg.outputs.directory);
    read_opt(o, "formats", cfg.outputs.formats);

    read_opt(j, "threads", cfg.threads);
    read_opt(j, "ed_cap", cfg.ed_cap);
    read_opt(j, "qgt_cap", cfg.qgt_cap);
    std::string corr = "pearson";
    read_opt(j, "correlation", corr);
    if (corr == "pearson") {
      cfg.correlation = Correlation::kPearson;
    } else if (corr == "spearman") {
      cfg.correlation = Correlation::kSpearman;
    } else {
      throw ConfigError("correlation must be pearson or spearman");
    }
    if (j.contains("reference_energy") && !j.at("reference_energy").is_null()) {
      cfg.reference_energy = j.at("reference_energy").get<double>();
    }
    read_opt(j, "reference_table", cfg.reference_table);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("bad run config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception &e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig &cfg) {
  json h = {{"model", cfg.hamiltonian.model},
            {"periodic", cfg.hamiltonian.periodic},
            {"j1", cfg.hamiltonian.j1},
            {"j2_over_j1", cfg.hamiltonian.j2_over_j1},
            {"unit_scale", cfg.hamiltonian.unit_scale},
            {"sign_rule", cfg.hamiltonian.sign_rule}};
  if (cfg.hamiltonian.model == "heisenberg_chain") {
    h["L"] = cfg.hamiltonian.length;
  } else {
    h["Lx"] = cfg.hamiltonian.lx;
    h["Ly"] = cfg.hamiltonian.ly;
  }
  json j = {
      {"hamiltonian", h},
      {"ansatz",
       {{"model", cfg.ansatz.model},
        {"hidden", cfg.ansatz.hidden},
        {"encoders", cfg.ansatz.encoders},
        {"seed", cfg.ansatz.seed}}},
      {"sampler",
       {{"mode", mode_name(cfg.sampler.mode)},
        {"n_samples", cfg.sampler.n_samples},
        {"n_chains", cfg.sampler.n_chains},
        {"burn_in", cfg.sampler.burn_in},
        {"thin", cfg.sampler.thin},
        {"total_sz", cfg.sampler.total_sz},
        {"exact_cap", cfg.sampler.exact_cap},
        {"rng_seed", cfg.sampler.rng_seed}}},
      {"solver",
       {{"strategy", to_string(cfg.solver.strategy)},
        {"eta", cfg.solver.eta},
        {"lambda", cfg.solver.lambda},
        {"rcond", cfg.solver.rcond},
        {"warmup_epochs", cfg.solver.warmup_epochs},
        {"layer_lambda", cfg.solver.layer_lambda}}},
      {"schedule",
       {{"epochs", cfg.schedule.epochs},
        {"diagnostics_every", cfg.schedule.diagnostics_every},
        {"snapshot_every", cfg.schedule.snapshot_every}}},
      {"outputs",
       {{"directory", cfg.outputs.directory},
        {"formats", cfg.outputs.formats}}},
      {"threads", cfg.threads},
      {"ed_cap", cfg.ed_cap},
      {"qgt_cap", cfg.qgt_cap},
      {"correlation",
       cfg.correlation == Correlation::kPearson ? "pearson" : "spearman"},
      {"reference_energy", cfg.reference_energy
                               ? json(*cfg.reference_energy)
                               : json(nullptr)},
      {"reference_table", cfg.reference_table},
  };
  return j;
}

RunConfig with_overrides(const RunConfig &base, const json &patch) {
  json j = to_json(base);
  j.merge_patch(patch);
  return parse_config(j);
}

SpinHamiltonian build_hamiltonian(const HamiltonianSpec &spec) {
  if (spec.model == "heisenberg_chain") {
    return SpinHamiltonian(LatticeGeometry::chain(spec.length, spec.periodic),
                           spec.j1, 0.0, spec.unit_scale, spec.sign_rule);
  }
  if (spec.model == "j1j2_square") {
    return SpinHamiltonian(
        LatticeGeometry::square(spec.lx, spec.ly, spec.periodic), spec.j1,
        spec.j1 * spec.j2_over_j1, spec.unit_scale, spec.sign_rule);
  }
  throw ConfigError("unknown hamiltonian model '" + spec.model + "'");
}

std::unique_ptr<Ansatz> build_ansatz(const AnsatzSpec &spec, int num_sites) {
  std::unique_ptr<Ansatz> psi;
  if (spec.model == "mlp") {
    psi = std::make_unique<MlpAnsatz>(num_sites, spec.hidden, spec.encoders);
  } else if (spec.model == "rbm") {
    psi = std::make_unique<RbmAnsatz>(num_sites, spec.hidden);
  } else {
    throw ConfigError("unknown ansatz model '" + spec.model + "'");
  }
  psi->initialize(spec.seed);
  return psi;
}

std::filesystem::path default_reference_table() {
  return std::filesystem::path(VMC_DATA_DIR) / "reference_energies.tsv";
}

std::optional<double> lookup_reference_energy(
    const HamiltonianSpec &spec, const std::filesystem::path &table) {
  std::ifstream in(table);
  if (!in) return std::nullopt;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string model, size;
    double j2 = 0.0, scale = 0.0, energy = 0.0;
    if (!(ss >> model >> size >> j2 >> scale >> energy)) continue;
    if (model == spec.model && size == spec.size_label() &&
        std::abs(j2 - spec.j2_over_j1) < 1e-12) {
      return energy * spec.unit_scale / scale;
    }
  }
  return std::nullopt;
}

}  // namespace vmc
