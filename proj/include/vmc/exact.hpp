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

#ifndef VMC_EXACT_HPP
#define VMC_EXACT_HPP

#include <string>

#include <Eigen/SparseCore>

#include "vmc/ansatz.hpp"
#include "vmc/estimators.hpp"
#include "vmc/hamiltonian.hpp"
#include "vmc/hilbert.hpp"
#include "vmc/types.hpp"

namespace vmc {

struct GroundStateResult {
  double energy = 0.0;
  ComplexVector vector;  // normalized, indexed like the sector basis
  std::string method;    // "dense" or "lanczos"
  int iterations = 0;
  double residual = 0.0;  // ||H v - E v||
};

struct LanczosOptions {
  // Sectors up to this dimension are diagonalized densely.
  std::size_t dense_threshold = 1024;
  int max_iterations = 300;  // Krylov vectors kept per restart
  int max_restarts = 20;
  double tolerance = 1e-10;  // on the Ritz residual estimate
  std::uint64_t seed = 0x5eed;
};

GroundStateResult dense_ground_state(const RealMatrix &h);

// Lanczos with full reorthogonalization, restarted from the current Ritz
// vector when the basis fills up. Throws OracleError on non-convergence.
GroundStateResult lanczos_ground_state(const Eigen::SparseMatrix<double> &h,
                                       const LanczosOptions &opts = {});

GroundStateResult ground_state(const SpinHamiltonian &h, const Sector &sector,
                               const LanczosOptions &opts = {});

// psi over the sector basis, normalized to unit norm.
ComplexVector materialize(const Ansatz &psi, const Sector &sector);

// Metric with exact Born weights over the whole sector.
QgtMatrix exact_qgt(const Ansatz &psi, const Sector &sector, int threads = 1);

// 1 - |<psi|phi>|^2 / (<psi|psi><phi|phi>), clamped to [0, 1].
double infidelity(const Ansatz &psi, const ComplexVector &phi,
                  const Sector &sector);
double infidelity(const ComplexVector &psi, const ComplexVector &phi);

}  // namespace vmc

#endif  // VMC_EXACT_HPP
