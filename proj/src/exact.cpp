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

#include "vmc/exact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "vmc/errors.hpp"
#include "vmc/rng.hpp"
#include "vmc/sampler.hpp"

namespace vmc {

GroundStateResult dense_ground_state(const RealMatrix &h) {
  if (h.rows() == 0 || h.rows() != h.cols()) {
    throw InvalidArgumentError("dense ground state needs a square matrix");
  }
  GroundStateResult out;
  out.method = "dense";
  RealVector v;
  if (h.rows() == 2) {
    // Closed form; exact for dyadic entries such as the two-site sector.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig;
    eig.computeDirect(Eigen::Matrix2d(h));
    out.energy = eig.eigenvalues()[0];
    v = eig.eigenvectors().col(0);
  } else {
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(h);
    if (eig.info() != Eigen::Success) {
      throw OracleError("dense eigendecomposition failed");
    }
    out.energy = eig.eigenvalues()[0];
    v = eig.eigenvectors().col(0);
  }
  out.vector = v.cast<Complex>();
  out.residual = (h * v - out.energy * v).norm();
  return out;
}

GroundStateResult lanczos_ground_state(const Eigen::SparseMatrix<double> &h,
                                       const LanczosOptions &opts) {
  const Index dim = h.rows();
  if (dim == 0 || h.cols() != dim) {
    throw InvalidArgumentError("Lanczos needs a square matrix");
  }
  CounterRng rng(opts.seed, 0, 0, StreamPurpose::kLanczosStart);
  RealVector start(dim);
  for (Index k = 0; k < dim; ++k) start[k] = rng.uniform() - 0.5;
  start.normalize();

  const int kmax = static_cast<int>(std::min<Index>(opts.max_iterations, dim));
  RealMatrix basis(dim, kmax);
  int total_iterations = 0;
  double last_residual = 0.0;

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    basis.col(0) = start;
    RealVector ritz;
    double theta = 0.0;
    int used = 0;
    bool converged = false;
    for (int j = 0; j < kmax; ++j) {
      ++total_iterations;
      RealVector w = h * basis.col(j);
      alpha.push_back(basis.col(j).dot(w));
      // Full reorthogonalization, twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        const auto v = basis.leftCols(j + 1);
        w -= v * (v.transpose() * w);
      }
      const double b = w.norm();
      used = j + 1;

      const Index m = used;
      RealVector diag = Eigen::Map<RealVector>(alpha.data(), m);
      RealVector sub(std::max<Index>(m - 1, 0));
      for (Index k = 0; k + 1 < m; ++k) sub[k] = beta[static_cast<std::size_t>(k)];
      Eigen::SelfAdjointEigenSolver<RealMatrix> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      theta = tri.eigenvalues()[0];
      ritz = tri.eigenvectors().col(0);
      const double estimate = b * std::abs(ritz[m - 1]);
      converged = estimate < opts.tolerance || b < 1e-14;
      if (converged || used == kmax) break;
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
    RealVector x = basis.leftCols(used) * ritz;
    x.normalize();
    last_residual = (h * x - theta * x).norm();
    if ((converged && last_residual < 1e-8) ||
        last_residual < opts.tolerance) {
      GroundStateResult out;
      out.energy = theta;
      out.vector = x.cast<Complex>();
      out.method = "lanczos";
      out.iterations = total_iterations;
      out.residual = last_residual;
      return out;
    }
    start = x;
  }
  std::ostringstream msg;
  msg << "Lanczos did not converge after " << total_iterations
      << " iterations, residual " << last_residual;
  throw OracleError(msg.str());
}

GroundStateResult ground_state(const SpinHamiltonian &h, const Sector &sector,
                               const LanczosOptions &opts) {
  const Eigen::SparseMatrix<double> m = sector_matrix(h, sector);
  if (sector.dimension() <= opts.dense_threshold) {
    return dense_ground_state(RealMatrix(m));
  }
  return lanczos_ground_state(m, opts);
}

ComplexVector materialize(const Ansatz &psi, const Sector &sector) {
  ComplexVector log_amps(static_cast<Index>(sector.dimension()));
  for (std::size_t k = 0; k < sector.dimension(); ++k) {
    log_amps[static_cast<Index>(k)] = psi.log_psi(sector.configuration(k));
  }
  const double shift = log_amps.real().maxCoeff();
  ComplexVector v = (log_amps.array() - shift).exp().matrix();
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DegenerateStateError("wavefunction has zero norm on the sector");
  }
  return v / n;
}

QgtMatrix exact_qgt(const Ansatz &psi, const Sector &sector, int threads) {
  return qgt_full(sample_exact(psi, sector, threads));
}

double infidelity(const ComplexVector &psi, const ComplexVector &phi) {
  if (psi.size() != phi.size()) {
    throw InvalidArgumentError("state vectors differ in length");
  }
  const double np = psi.squaredNorm();
  const double nf = phi.squaredNorm();
  if (!(np > 0.0) || !(nf > 0.0)) {
    throw DegenerateStateError("infidelity of a zero-norm state");
  }
  const double overlap = std::norm(psi.dot(phi)) / (np * nf);
  return std::clamp(1.0 - overlap, 0.0, 1.0);
}

double infidelity(const Ansatz &psi, const ComplexVector &phi,
                  const Sector &sector) {
  if (static_cast<std::size_t>(phi.size()) != sector.dimension()) {
    throw InvalidArgumentError("reference vector does not match the sector");
  }
  return infidelity(materialize(psi, sector), phi);
}

}  // namespace vmc
