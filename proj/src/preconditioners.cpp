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

#include "vmc/preconditioners.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "vmc/errors.hpp"
#include "vmc/parallel.hpp"

namespace vmc {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kFull:
      return "full";
    case Strategy::kBlock:
      return "block";
    case Strategy::kNtk:
      return "ntk";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string &name) {
  if (name == "full") return Strategy::kFull;
  if (name == "block") return Strategy::kBlock;
  if (name == "ntk") return Strategy::kNtk;
  throw ConfigError("unknown solver strategy '" + name + "'");
}

void SolveConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ConfigError("eta must be positive");
  }
  if (lambda < 0.0 || rcond < 0.0) {
    throw ConfigError("lambda and rcond must be nonnegative");
  }
  if (!(lambda > 0.0) && !(rcond > 0.0)) {
    throw ConfigError("at least one of lambda and rcond must be positive");
  }
  for (const auto &[layer, value] : layer_lambda) {
    if (value < 0.0) {
      throw ConfigError("negative lambda override for layer '" + layer + "'");
    }
  }
  if (warmup_epochs < 0) throw ConfigError("warmup_epochs must be >= 0");
}

double SolveConfig::lambda_for(const std::string &layer) const {
  const auto it = layer_lambda.find(layer);
  return it == layer_lambda.end() ? lambda : it->second;
}

double SolveConfig::eta_at(int epoch) const {
  if (warmup_epochs <= 0) return eta;
  return eta * std::min(1.0, double(epoch + 1) / double(warmup_epochs));
}

RealVector shifted_pinv_solve(const RealMatrix &m, const RealVector &rhs,
                              double lambda, double rcond) {
  if (m.rows() != m.cols() || m.rows() != rhs.size()) {
    throw InvalidArgumentError("shape mismatch in shifted solve");
  }
  if (m.rows() == 0) return RealVector();
  RealMatrix shifted = m;
  shifted.diagonal().array() += lambda;
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(shifted);
  RealVector ev;
  RealMatrix v;
  if (eig.info() == Eigen::Success) {
    ev = eig.eigenvalues();
    v = eig.eigenvectors();
  } else {
    // The tridiagonal QR occasionally stalls on badly scaled matrices. For a
    // symmetric matrix the SVD carries the same spectrum up to signs.
    Eigen::BDCSVD<RealMatrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "eigendecomposition failed (n=" << m.rows()
          << ", max|diag|=" << m.diagonal().cwiseAbs().maxCoeff()
          << ", finite=" << (m.allFinite() ? "yes" : "no") << ")";
      throw SolverError(msg.str());
    }
    v = svd.matrixV();
    ev = svd.singularValues();
    for (Index k = 0; k < ev.size(); ++k) {
      if (svd.matrixU().col(k).dot(v.col(k)) < 0.0) ev[k] = -ev[k];
    }
  }
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return RealVector::Zero(rhs.size());
  const double cut = rcond * top;
  RealVector inv(ev.size());
  for (Index k = 0; k < ev.size(); ++k) {
    inv[k] = (ev[k] > cut && ev[k] > 0.0) ? 1.0 / ev[k] : 0.0;
  }
  return v * (inv.asDiagonal() * (v.transpose() * rhs));
}

namespace {

std::vector<std::pair<std::string, double>> norms(
    const RealVector &delta, const ParameterPartition &partition) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto &l : partition.layers()) {
    out.emplace_back(l.name, delta.segment(l.offset, l.length).norm());
  }
  return out;
}

void check_force(const ForceVector &f, Index n) {
  if (f.size() != n) {
    throw InvalidArgumentError("force has length " + std::to_string(f.size()) +
                               ", expected " + std::to_string(n));
  }
}

}  // namespace

UpdateVector solve_full(const QgtMatrix &s, const ForceVector &f,
                        const SolveConfig &cfg,
                        const ParameterPartition &partition) {
  cfg.validate();
  check_force(f, s.size());
  if (partition.total() != s.size()) {
    throw InvalidArgumentError("partition does not match QGT size");
  }
  UpdateVector out;
  out.delta_theta =
      -cfg.eta * shifted_pinv_solve(s.entries.real(), f, cfg.lambda, cfg.rcond);
  out.layer_norms = norms(out.delta_theta, partition);
  return out;
}

UpdateVector solve_full(const QgtMatrix &s, const ForceVector &f,
                        const SolveConfig &cfg) {
  return solve_full(s, f, cfg, ParameterPartition::single("all", s.size()));
}

UpdateVector solve_block(const BlockQgt &blocks, const ForceVector &f,
                         const ParameterPartition &partition,
                         const SolveConfig &cfg, int threads) {
  cfg.validate();
  check_force(f, partition.total());
  if (blocks.blocks.size() != partition.size()) {
    throw InvalidArgumentError("block count does not match partition");
  }
  const auto &layers = partition.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (blocks.blocks[l].layer != layers[l].name ||
        blocks.blocks[l].entries.rows() != layers[l].length) {
      throw InvalidArgumentError("block '" + blocks.blocks[l].layer +
                                 "' does not align with layer '" +
                                 layers[l].name + "'");
    }
  }
  UpdateVector out;
  out.delta_theta.resize(partition.total());
  parallel_for(layers.size(), threads, [&](std::size_t l) {
    const auto &layer = layers[l];
    try {
      out.delta_theta.segment(layer.offset, layer.length) =
          -cfg.eta * shifted_pinv_solve(blocks.blocks[l].entries.real(),
                                        f.segment(layer.offset, layer.length),
                                        cfg.lambda_for(layer.name), cfg.rcond);
    } catch (const SolverError &e) {
      throw SolverError("layer '" + layer.name + "': " + e.what());
    }
  });
  out.layer_norms = norms(out.delta_theta, partition);
  return out;
}

UpdateVector solve_ntk(const SampleBatch &batch, const SolveConfig &cfg,
                       const ParameterPartition &partition) {
  cfg.validate();
  if (partition.total() != batch.num_parameters()) {
    throw InvalidArgumentError("partition does not match batch parameters");
  }
  RealMatrix a;
  RealVector e;
  stacked_jacobian(batch, a, e);
  RealMatrix t = a * a.transpose();
  t = (t + t.transpose()) * 0.5;
  const RealVector y = shifted_pinv_solve(t, e, cfg.lambda, cfg.rcond);
  UpdateVector out;
  out.delta_theta = -2.0 * cfg.eta * (a.transpose() * y);
  out.layer_norms = norms(out.delta_theta, partition);
  return out;
}

}  // namespace vmc
