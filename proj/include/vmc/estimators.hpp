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

#ifndef VMC_ESTIMATORS_HPP
#define VMC_ESTIMATORS_HPP

#include <string>
#include <vector>

#include "vmc/ansatz.hpp"
#include "vmc/sampler.hpp"
#include "vmc/types.hpp"

namespace vmc {

struct EnergyEstimate {
  Complex mean;
  double std_error = 0.0;  // zero for exact-mode batches
  double variance = 0.0;
};

// Gradient of E with respect to the real parameter components.
using ForceVector = RealVector;

// Hermitian positive-semidefinite metric S_ij = E[conj(dO_i) dO_j].
struct QgtMatrix {
  ComplexMatrix entries;
  Index size() const { return entries.rows(); }
};

struct QgtBlock {
  std::string layer;
  ComplexMatrix entries;
};

// Diagonal blocks of the QGT, one per layer, in partition order.
struct BlockQgt {
  std::vector<QgtBlock> blocks;

  Index total() const;
  // Block-diagonal Np x Np matrix with zero off-diagonal blocks.
  ComplexMatrix assemble() const;
};

inline constexpr Index kDefaultQgtCap = 4096;

EnergyEstimate energy(const SampleBatch &batch);

// F_i = 2 Re sum_k w_k conj(dO_ki) (E_loc(x_k) - E).
ForceVector force(const SampleBatch &batch);

// Full metric. With real_only the imaginary part is skipped (left zero),
// which is all the update solve consumes. Throws CapacityError above cap.
QgtMatrix qgt_full(const SampleBatch &batch, bool real_only = false,
                   Index cap = kDefaultQgtCap);

// Per-layer blocks computed from layer slices only; the Np x Np matrix is
// never formed. Entry (i, j) of a block is bit-identical to the same entry
// of qgt_full on the same batch.
BlockQgt qgt_blocks(const SampleBatch &batch,
                    const ParameterPartition &partition,
                    bool real_only = false);

// Sample-space Gram matrix T = W^1/2 dO dO^dag W^1/2 (Ns x Ns). Its nonzero
// spectrum coincides with that of the complex QGT.
ComplexMatrix ntk(const SampleBatch &batch);

// Real Gram matrix A A^T of the stacked Jacobian A = [Re X; Im X] with
// X = W^1/2 dO (2Ns x 2Ns). Its nonzero spectrum coincides with Re S.
RealMatrix ntk_real(const SampleBatch &batch);

// A = [Re X; Im X] and e = [Re W^1/2 eps; Im W^1/2 eps] with eps the centered
// local energies, so that Re S = A^T A and F = 2 A^T e.
void stacked_jacobian(const SampleBatch &batch, RealMatrix &a, RealVector &e);

}  // namespace vmc

#endif  // VMC_ESTIMATORS_HPP
