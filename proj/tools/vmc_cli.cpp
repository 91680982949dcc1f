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

// Command-line driver: vmc {train,diagnose,ed,compare} --config PATH [...]
//
// Exit status is 0 on success. Failures print one JSON object to stderr,
// {"error": <kind>, "message": <text>}, and exit 1 (runtime error),
// 2 (usage) or 3 (unexpected).

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "vmc/errors.hpp"
#include "vmc/runner.hpp"

namespace {

using nlohmann::json;

int fail(const std::string &kind, const std::string &message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
  return code;
}

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App *app, Common &c) {
  app->add_option("--config", c.config, "JSON run configuration")->required();
  app->add_option("--out", c.out, "output directory (overrides outputs.directory)");
  app->add_option("--seed", c.seed, "sets ansatz.seed and sampler.rng_seed");
  app->add_option("--threads", c.threads, "worker threads");
}

json overrides(const Common &c) {
  json patch = json::object();
  if (!c.out.empty()) patch["outputs"]["directory"] = c.out;
  if (c.seed) {
    patch["ansatz"]["seed"] = *c.seed;
    patch["sampler"]["rng_seed"] = *c.seed;
  }
  if (c.threads) patch["threads"] = *c.threads;
  return patch;
}

vmc::RunConfig resolve(const Common &c) {
  return vmc::with_overrides(vmc::load_config(c.config), overrides(c));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Variational Monte Carlo for spin-1/2 lattice models"};
  app.require_subcommand(1);

  Common train_opts, diag_opts, ed_opts, cmp_opts;
  std::string resume, checkpoint;
  bool save_state = false;

  auto *train = app.add_subcommand("train", "optimize an ansatz");
  add_common(train, train_opts);
  train->add_option("--resume", resume, "checkpoint to continue from");

  auto *diag = app.add_subcommand("diagnose", "compare sampled and exact metrics");
  add_common(diag, diag_opts);
  diag->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

  auto *ed = app.add_subcommand("ed", "exact ground state");
  add_common(ed, ed_opts);
  ed->add_flag("--save-state", save_state, "write the ground-state vector");

  auto *cmp = app.add_subcommand("compare", "run a strategy sweep");
  add_common(cmp, cmp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail("usage_error", e.what(), 2);
  }

  try {
    if (*train) {
      const auto cfg = resolve(train_opts);
      std::optional<std::filesystem::path> from;
      if (!resume.empty()) from = resume;
      const auto r = vmc::train(cfg, from);
      json out = {{"output_dir", r.output_dir.string()},
                  {"final_energy", r.trace.back().energy.real()},
                  {"wall_seconds", r.wall_seconds}};
      if (r.final_exact_energy) out["final_exact_energy"] = *r.final_exact_energy;
      if (r.final_infidelity) out["final_infidelity"] = *r.final_infidelity;
      std::cout << out.dump() << std::endl;
    } else if (*diag) {
      const auto cfg = resolve(diag_opts);
      const auto [block, full] = vmc::diagnose(cfg, checkpoint, cfg.outputs.directory);
      std::cout << vmc::render_table(block, full);
    } else if (*ed) {
      const auto cfg = resolve(ed_opts);
      const auto gs = vmc::run_ed(cfg, cfg.outputs.directory, save_state);
      std::cout << json{{"energy", gs.energy}, {"method", gs.method},
                        {"residual", gs.residual}}.dump()
                << std::endl;
    } else if (*cmp) {
      std::ifstream in(cmp_opts.config);
      if (!in) throw vmc::IoError("cannot open " + cmp_opts.config);
      json sweep;
      try {
        sweep = json::parse(in, nullptr, true, /*ignore_comments=*/true);
      } catch (const json::exception &e) {
        throw vmc::ConfigError(std::string("cannot parse sweep: ") + e.what());
      }
      // Seed and thread overrides apply to every run through the base config.
      json patch = overrides(cmp_opts);
      patch.erase("outputs");
      if (!patch.empty()) sweep["base"].merge_patch(patch);
      const std::string out =
          cmp_opts.out.empty() ? sweep.value("directory", std::string("compare"))
                               : cmp_opts.out;
      const auto rows = vmc::compare_strategies(sweep, out);
      int failed = 0;
      for (const auto &r : rows) {
        std::cout << r.label << '\t' << r.status << '\n';
        if (r.status != "ok") ++failed;
      }
      if (failed > 0) {
        return fail("sweep_error", std::to_string(failed) + " run(s) failed", 1);
      }
    }
  } catch (const vmc::VmcError &e) {
    return fail(e.kind(), e.what(), 1);
  } catch (const std::exception &e) {
    return fail("internal_error", e.what(), 3);
  }
  return 0;
}
