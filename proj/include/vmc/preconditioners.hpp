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

#ifndef VMC_PRECONDITIONERS_HPP
#define VMC_PRECONDITIONERS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vmc/ansatz.hpp"
#include "vmc/estimators.hpp"
#include "vmc/sampler.hpp"
#include "vmc/types.hpp"

namespace vmc {

enum class Strategy { kFull, kBlock, kNtk };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string &name);

struct SolveConfig {
  Strategy strategy = Strategy::kBlock;
  double eta = 0.01;
  double lambda = 1e-4;
  double rcond = 1e-12;
  int warmup_epochs = 0;
  // Optional per-layer shift overrides; layers not listed use lambda.
  std::map<std::string, double> layer_lambda;

  // Throws ConfigError.
  void validate() const;
  double lambda_for(const std::string &layer) const;
  // Learning rate at an epoch, with linear warm-up over warmup_epochs.
  double eta_at(int epoch) const;
};

struct UpdateVector {
  RealVector delta_theta;
  std::vector<std::pair<std::string, double>> layer_norms;
};

// x = pinv(M + lambda I, rcond) rhs for symmetric M: eigenvalues of the
// shifted matrix at or below rcond * max eigenvalue are discarded.
RealVector shifted_pinv_solve(const RealMatrix &m, const RealVector &rhs,
                              double lambda, double rcond);

// delta = -eta pinv(Re S + lambda I, rcond) F.
UpdateVector solve_full(const QgtMatrix &s, const ForceVector &f,
                        const SolveConfig &cfg,
                        const ParameterPartition &partition);
UpdateVector solve_full(const QgtMatrix &s, const ForceVector &f,
                        const SolveConfig &cfg);

// delta_l = -eta pinv(Re S_l + lambda_l I, rcond) F_l, concatenated in layer
// order. Blocks are solved independently (concurrently with threads > 1).
UpdateVector solve_block(const BlockQgt &blocks, const ForceVector &f,
                         const ParameterPartition &partition,
                         const SolveConfig &cfg, int threads = 1);

// Sample-space solve delta = -2 eta A^T pinv(A A^T + lambda I, rcond) e with
// A, e from stacked_jacobian; equal to solve_full for a common lambda.
UpdateVector solve_ntk(const SampleBatch &batch, const SolveConfig &cfg,
                       const ParameterPartition &partition);

}  // namespace vmc

#endif  // VMC_PRECONDITIONERS_HPP
