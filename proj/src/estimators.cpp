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

// This file is compiled with -ffp-contract=off: the Gram kernel must perform
// the same IEEE operations for an entry whether it lands in a vectorized body
// or a scalar remainder, so block and full metrics agree bit for bit.

#include "vmc/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "vmc/errors.hpp"

namespace vmc {

namespace {

// Rows scaled by sqrt(w), split into row-major real and imaginary planes.
struct ScaledJacobian {
  Index rows = 0;
  Index cols = 0;
  std::vector<double> re;
  std::vector<double> im;
};

ScaledJacobian scale_rows(const SampleBatch &batch) {
  ScaledJacobian x;
  x.rows = batch.delta_O.rows();
  x.cols = batch.delta_O.cols();
  const auto n = static_cast<std::size_t>(x.rows * x.cols);
  x.re.resize(n);
  x.im.resize(n);
  for (Index k = 0; k < x.rows; ++k) {
    const double s = std::sqrt(batch.weights[k]);
    for (Index j = 0; j < x.cols; ++j) {
      const Complex v = batch.delta_O(k, j);
      const auto at = static_cast<std::size_t>(k * x.cols + j);
      x.re[at] = s * v.real();
      x.im[at] = s * v.imag();
    }
  }
  return x;
}

constexpr Index kRowTile = 64;
constexpr Index kRowBlock = 4;

// S = X^dag X restricted to columns [offset, offset + length). Every entry is
// accumulated tile by tile over rows in a fixed order, independent of length
// and of how output rows are grouped.
ComplexMatrix gram(const ScaledJacobian &x, Index offset, Index length,
                   bool real_only) {
  const Index n = length;
  RealMatrix s_re = RealMatrix::Zero(n, n);
  RealMatrix s_im = RealMatrix::Zero(n, n);
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> acc_re(kRowBlock * un);
  std::vector<double> acc_im(kRowBlock * un);
  const std::size_t stride = static_cast<std::size_t>(x.cols);

  for (Index k0 = 0; k0 < x.rows; k0 += kRowTile) {
    const Index k1 = std::min(x.rows, k0 + kRowTile);
    for (Index i0 = 0; i0 < n; i0 += kRowBlock) {
      const Index nb = std::min(kRowBlock, n - i0);
      std::fill(acc_re.begin(), acc_re.end(), 0.0);
      std::fill(acc_im.begin(), acc_im.end(), 0.0);
      for (Index k = k0; k < k1; ++k) {
        const double *rr = x.re.data() + static_cast<std::size_t>(k) * stride +
                           static_cast<std::size_t>(offset);
        const double *ri = x.im.data() + static_cast<std::size_t>(k) * stride +
                           static_cast<std::size_t>(offset);
        for (Index r = 0; r < nb; ++r) {
          const double a = rr[i0 + r];
          const double b = ri[i0 + r];
          double *are = acc_re.data() + static_cast<std::size_t>(r) * un;
          for (Index j = i0; j < n; ++j) are[j] += a * rr[j] + b * ri[j];
          if (!real_only) {
            double *aim = acc_im.data() + static_cast<std::size_t>(r) * un;
            for (Index j = i0; j < n; ++j) aim[j] += a * ri[j] - b * rr[j];
          }
        }
      }
      // Column-major storage: entry (i, j) of the upper triangle.
      for (Index r = 0; r < nb; ++r) {
        const Index i = i0 + r;
        const double *are = acc_re.data() + static_cast<std::size_t>(r) * un;
        const double *aim = acc_im.data() + static_cast<std::size_t>(r) * un;
        for (Index j = i; j < n; ++j) {
          s_re(i, j) += are[j];
          if (!real_only) s_im(i, j) += aim[j];
        }
      }
    }
  }

  ComplexMatrix s(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      s(i, j) = Complex(s_re(i, j), s_im(i, j));
      s(j, i) = std::conj(s(i, j));
    }
  }
  return s;
}

ComplexVector centered_energies(const SampleBatch &batch, Complex mean) {
  if (batch.local_energies.size() != batch.size()) {
    throw InvalidArgumentError("batch carries no local energies");
  }
  return batch.local_energies.array() - mean;
}

}  // namespace

Index BlockQgt::total() const {
  Index n = 0;
  for (const auto &b : blocks) n += b.entries.rows();
  return n;
}

ComplexMatrix BlockQgt::assemble() const {
  const Index n = total();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  Index at = 0;
  for (const auto &b : blocks) {
    const Index len = b.entries.rows();
    m.block(at, at, len, len) = b.entries;
    at += len;
  }
  return m;
}

EnergyEstimate energy(const SampleBatch &batch) {
  if (batch.size() == 0 || batch.local_energies.size() != batch.size()) {
    throw InvalidArgumentError("energy needs a populated batch");
  }
  const ComplexVector w = batch.weights.cast<Complex>();
  EnergyEstimate est;
  est.mean = w.dot(batch.local_energies);  // weights are real: no conj effect
  est.variance =
      batch.weights.dot((batch.local_energies.array() - est.mean)
                            .abs2()
                            .matrix());
  if (batch.mode == SamplingMode::kExact) {
    est.std_error = 0.0;
  } else {
    // Effective sample size 1 / sum w^2 (= Ns for uniform weights).
    est.std_error = std::sqrt(est.variance * batch.weights.squaredNorm());
  }
  return est;
}

ForceVector force(const SampleBatch &batch) {
  const EnergyEstimate e = energy(batch);
  const ComplexVector eps = centered_energies(batch, e.mean);
  const ComplexVector weighted =
      (batch.weights.cast<Complex>().array() * eps.array()).matrix();
  return 2.0 * (batch.delta_O.adjoint() * weighted).real();
}

QgtMatrix qgt_full(const SampleBatch &batch, bool real_only, Index cap) {
  const Index np = batch.num_parameters();
  if (np > cap) {
    throw CapacityError("full QGT with " + std::to_string(np) +
                        " parameters exceeds the cap of " +
                        std::to_string(cap));
  }
  const ScaledJacobian x = scale_rows(batch);
  return QgtMatrix{gram(x, 0, np, real_only)};
}

BlockQgt qgt_blocks(const SampleBatch &batch,
                    const ParameterPartition &partition, bool real_only) {
  if (partition.total() != batch.num_parameters()) {
    throw InvalidArgumentError("partition does not cover the batch parameters");
  }
  const ScaledJacobian x = scale_rows(batch);
  BlockQgt out;
  out.blocks.reserve(partition.size());
  for (const auto &l : partition.layers()) {
    out.blocks.push_back({l.name, gram(x, l.offset, l.length, real_only)});
  }
  return out;
}

ComplexMatrix ntk(const SampleBatch &batch) {
  const RealVector sw = batch.weights.array().sqrt();
  const ComplexMatrix x = sw.cast<Complex>().asDiagonal() * batch.delta_O;
  ComplexMatrix t = x * x.adjoint();
  return (t + t.adjoint()) * 0.5;
}

void stacked_jacobian(const SampleBatch &batch, RealMatrix &a, RealVector &e) {
  const Index ns = batch.size();
  const Index np = batch.num_parameters();
  const RealVector sw = batch.weights.array().sqrt();
  a.resize(2 * ns, np);
  a.topRows(ns) = sw.asDiagonal() * batch.delta_O.real();
  a.bottomRows(ns) = sw.asDiagonal() * batch.delta_O.imag();
  e.resize(2 * ns);
  if (batch.local_energies.size() == ns) {
    const ComplexVector eps = centered_energies(batch, energy(batch).mean);
    e.head(ns) = sw.asDiagonal() * eps.real();
    e.tail(ns) = sw.asDiagonal() * eps.imag();
  } else {
    e.setZero();
  }
}

RealMatrix ntk_real(const SampleBatch &batch) {
  RealMatrix a;
  RealVector e;
  stacked_jacobian(batch, a, e);
  RealMatrix t = a * a.transpose();
  return (t + t.transpose()) * 0.5;
}

}  // namespace vmc
