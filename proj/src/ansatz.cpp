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

#include "vmc/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <unordered_set>

#include "vmc/errors.hpp"
#include "vmc/rng.hpp"

namespace vmc {

ParameterPartition::ParameterPartition(std::vector<LayerSlice> layers)
    : layers_(std::move(layers)) {
  std::unordered_set<std::string> names;
  Index next = 0;
  for (const auto &l : layers_) {
    if (l.offset != next || l.length < 0) {
      throw InvalidArgumentError("layer '" + l.name +
                                 "' is not contiguous with its predecessor");
    }
    if (!names.insert(l.name).second) {
      throw InvalidArgumentError("duplicate layer name '" + l.name + "'");
    }
    next += l.length;
  }
  total_ = next;
}

ParameterPartition ParameterPartition::from_lengths(
    const std::vector<std::pair<std::string, Index>> &lengths) {
  std::vector<LayerSlice> layers;
  Index offset = 0;
  for (const auto &[name, length] : lengths) {
    layers.push_back({name, offset, length});
    offset += length;
  }
  return ParameterPartition(std::move(layers));
}

ParameterPartition ParameterPartition::single(std::string name, Index total) {
  return ParameterPartition({{std::move(name), 0, total}});
}

const LayerSlice &ParameterPartition::layer(std::string_view name) const {
  for (const auto &l : layers_) {
    if (l.name == name) return l;
  }
  throw UnknownLayerError("no layer named '" + std::string(name) + "'");
}

ComplexVector slice_by_layer(const ComplexVector &row,
                             const ParameterPartition &partition,
                             std::string_view layer) {
  const auto &l = partition.layer(layer);
  if (row.size() != partition.total()) {
    throw InvalidArgumentError("row length does not match partition");
  }
  return row.segment(l.offset, l.length);
}

RealVector slice_by_layer(const RealVector &v,
                          const ParameterPartition &partition,
                          std::string_view layer) {
  const auto &l = partition.layer(layer);
  if (v.size() != partition.total()) {
    throw InvalidArgumentError("vector length does not match partition");
  }
  return v.segment(l.offset, l.length);
}

Ansatz::Ansatz(ParameterPartition partition)
    : partition_(std::move(partition)),
      params_(RealVector::Zero(partition_.total())) {}

void Ansatz::set_parameters(const RealVector &params) {
  if (params.size() != params_.size()) {
    throw InvalidArgumentError(
        "parameter vector has length " + std::to_string(params.size()) +
        ", expected " + std::to_string(params_.size()));
  }
  params_ = params;
}

void Ansatz::check_sites(const SpinConfiguration &x) const {
  if (x.size() != num_sites()) {
    throw InvalidArgumentError(kind() + " ansatz expects " +
                               std::to_string(num_sites()) +
                               " sites, got " + std::to_string(x.size()));
  }
}

namespace {

constexpr Complex kI{0.0, 1.0};

// Interleaves complex gradients g into real-component derivatives.
void scatter_holomorphic(const Complex *g, Index n, Complex *out) {
  for (Index k = 0; k < n; ++k) {
    out[2 * k] = g[k];
    out[2 * k + 1] = kI * g[k];
  }
}

// tanh applied to the real and imaginary parts separately. Bounded and free
// of the poles of the holomorphic tanh at i pi (k + 1/2).
Complex split_tanh(Complex z) {
  return Complex(std::tanh(z.real()), std::tanh(z.imag()));
}

void fill_normal(Complex *dst, Index n, double stddev, CounterRng &rng) {
  for (Index k = 0; k < n; ++k) {
    const double re = rng.normal() * stddev;
    const double im = rng.normal() * stddev;
    dst[k] = Complex(re, im);
  }
}

template <typename Vec>
void require_finite(const Vec &v, const std::string &layer,
                    const SpinConfiguration &x) {
  if (!v.allFinite()) {
    throw NumericalOverflowError("non-finite activation in layer '" + layer +
                                 "' at configuration " + x.to_string());
  }
}

void require_finite(Complex v, const std::string &layer,
                    const SpinConfiguration &x) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NumericalOverflowError("non-finite value in layer '" + layer +
                                 "' at configuration " + x.to_string());
  }
}

std::vector<std::pair<std::string, Index>> linear_lengths(
    const std::vector<std::pair<std::string, int>> &layers) {
  std::vector<std::pair<std::string, Index>> out;
  for (const auto &[name, sites] : layers) out.emplace_back(name, 2 * sites);
  return out;
}

int total_sites(const std::vector<std::pair<std::string, int>> &layers) {
  int n = 0;
  for (const auto &l : layers) n += l.second;
  return n;
}

}  // namespace

Complex log_cosh(Complex z) {
  if (z.real() < 0.0) z = -z;
  return z + std::log(1.0 + std::exp(-2.0 * z)) - std::numbers::ln2;
}

// ---------------------------------------------------------------- linear

LinearAnsatz::LinearAnsatz(
    const std::vector<std::pair<std::string, int>> &layers)
    : Ansatz(ParameterPartition::from_lengths(linear_lengths(layers))),
      sites_(total_sites(layers)) {}

LinearAnsatz::LinearAnsatz(int num_sites)
    : LinearAnsatz(std::vector<std::pair<std::string, int>>{
          {"linear", num_sites}}) {}

std::unique_ptr<Ansatz> LinearAnsatz::clone() const {
  return std::make_unique<LinearAnsatz>(*this);
}

void LinearAnsatz::initialize(std::uint64_t seed) {
  CounterRng rng(seed, 0, 0, StreamPurpose::kParameterInit);
  fill_normal(complex_data(), sites_, 0.01, rng);
}

Complex LinearAnsatz::log_psi(const SpinConfiguration &x) const {
  check_sites(x);
  const Complex *theta = complex_data();
  Complex out = 0.0;
  for (int i = 0; i < sites_; ++i) out += theta[i] * static_cast<double>(x[i]);
  return out;
}

ComplexVector LinearAnsatz::log_derivatives(const SpinConfiguration &x) const {
  check_sites(x);
  ComplexVector g(sites_);
  for (int i = 0; i < sites_; ++i) g[i] = static_cast<double>(x[i]);
  ComplexVector row(num_parameters());
  scatter_holomorphic(g.data(), sites_, row.data());
  return row;
}

// ---------------------------------------------------------------- mlp

namespace {

ParameterPartition mlp_partition(int n, int h, int k) {
  if (n < 1 || h < 1 || k < 0) {
    throw InvalidArgumentError("mlp needs sites >= 1, hidden >= 1, encoders >= 0");
  }
  std::vector<std::pair<std::string, Index>> lengths;
  lengths.emplace_back("embedding", 2 * Index{h} * (n + 1));
  for (int e = 1; e <= k; ++e) {
    lengths.emplace_back("encoder_" + std::to_string(e),
                         2 * Index{h} * (h + 1));
  }
  lengths.emplace_back("output", 2 * Index{h + 1});
  return ParameterPartition::from_lengths(lengths);
}

using CMatMap = Eigen::Map<const ComplexMatrix>;
using CVecMap = Eigen::Map<const ComplexVector>;

}  // namespace

MlpAnsatz::MlpAnsatz(int num_sites, int hidden, int encoders)
    : Ansatz(mlp_partition(num_sites, hidden, encoders)),
      sites_(num_sites),
      hidden_(hidden),
      encoders_(encoders) {}

Index MlpAnsatz::encoder_offset(int k) const {
  return Index{hidden_} * (sites_ + 1) +
         Index{k - 1} * hidden_ * (hidden_ + 1);
}

Index MlpAnsatz::output_offset() const { return encoder_offset(encoders_ + 1); }

std::unique_ptr<Ansatz> MlpAnsatz::clone() const {
  return std::make_unique<MlpAnsatz>(*this);
}

void MlpAnsatz::initialize(std::uint64_t seed) {
  CounterRng rng(seed, 0, 0, StreamPurpose::kParameterInit);
  Complex *p = complex_data();
  const Index h = hidden_;
  fill_normal(p, h * (sites_ + 1), 0.01 / std::sqrt(double(sites_)), rng);
  for (int k = 1; k <= encoders_; ++k) {
    fill_normal(p + encoder_offset(k), h * (h + 1),
                0.01 / std::sqrt(double(h)), rng);
  }
  fill_normal(p + output_offset(), h + 1, 0.01 / std::sqrt(double(h)), rng);
}

Complex MlpAnsatz::forward(const SpinConfiguration &x,
                           std::vector<ComplexVector> &h,
                           std::vector<ComplexVector> &t) const {
  check_sites(x);
  const Complex *p = complex_data();
  const Index hd = hidden_;
  h.resize(static_cast<std::size_t>(encoders_) + 1);
  t.resize(static_cast<std::size_t>(encoders_) + 1);

  CMatMap we(p, hd, sites_);
  h[0] = CVecMap(p + hd * sites_, hd);
  for (int i = 0; i < sites_; ++i) {
    if (x[i] > 0) {
      h[0] += we.col(i);
    } else {
      h[0] -= we.col(i);
    }
  }
  require_finite(h[0], "embedding", x);

  for (int k = 1; k <= encoders_; ++k) {
    const Complex *q = p + encoder_offset(k);
    CMatMap w(q, hd, hd);
    CVecMap b(q + hd * hd, hd);
    const auto ks = static_cast<std::size_t>(k);
    t[ks] = (w * h[ks - 1] + b).unaryExpr(&split_tanh);
    h[ks] = h[ks - 1] + t[ks];
    require_finite(h[ks], "encoder_" + std::to_string(k), x);
  }

  const Complex *o = p + output_offset();
  const Complex out = CVecMap(o, hd).cwiseProduct(h.back()).sum() + o[hd];
  require_finite(out, "output", x);
  return out;
}

Complex MlpAnsatz::log_psi(const SpinConfiguration &x) const {
  thread_local std::vector<ComplexVector> h, t;
  return forward(x, h, t);
}

ComplexVector MlpAnsatz::log_derivatives(const SpinConfiguration &x) const {
  thread_local std::vector<ComplexVector> h, t;
  forward(x, h, t);
  const Complex *p = complex_data();
  const Index hd = hidden_;
  const Index n_complex = num_parameters() / 2;
  // Wirtinger derivatives d/dz and d/dconj(z) of log psi per complex weight.
  ComplexVector gp(n_complex), gq(n_complex);

  // Output layer (holomorphic).
  const Index oo = output_offset();
  gp.segment(oo, hd) = h.back();
  gp[oo + hd] = 1.0;
  gq.segment(oo, hd + 1).setZero();
  ComplexVector dp = CVecMap(p + oo, hd);
  ComplexVector dq = ComplexVector::Zero(hd);

  for (int k = encoders_; k >= 1; --k) {
    const auto ks = static_cast<std::size_t>(k);
    const Index off = encoder_offset(k);
    CMatMap w(p + off, hd, hd);
    // Through the split activation: real-component gradients of t scale by
    // 1 - tanh^2 of the matching component of the pre-activation.
    ComplexVector up(hd), uq(hd);
    for (Index j = 0; j < hd; ++j) {
      const Complex a = dp[j] + dq[j];
      const Complex b = kI * (dp[j] - dq[j]);
      const double tr = t[ks][j].real(), ti = t[ks][j].imag();
      const Complex ar = a * (1.0 - tr * tr);
      const Complex bi = b * (1.0 - ti * ti);
      up[j] = 0.5 * (ar - kI * bi);
      uq[j] = 0.5 * (ar + kI * bi);
    }
    Eigen::Map<ComplexMatrix>(gp.data() + off, hd, hd) = up * h[ks - 1].transpose();
    Eigen::Map<ComplexMatrix>(gq.data() + off, hd, hd) = uq * h[ks - 1].adjoint();
    gp.segment(off + hd * hd, hd) = up;
    gq.segment(off + hd * hd, hd) = uq;
    // Residual path plus the linear map.
    dp += w.transpose() * up;
    dq += w.adjoint() * uq;
  }

  Eigen::Map<ComplexMatrix> pwe(gp.data(), hd, sites_);
  Eigen::Map<ComplexMatrix> qwe(gq.data(), hd, sites_);
  for (int i = 0; i < sites_; ++i) {
    pwe.col(i) = static_cast<double>(x[i]) * dp;
    qwe.col(i) = static_cast<double>(x[i]) * dq;
  }
  gp.segment(hd * sites_, hd) = dp;
  gq.segment(hd * sites_, hd) = dq;
  require_finite(gp, "backward", x);
  require_finite(gq, "backward", x);

  ComplexVector row(num_parameters());
  for (Index k = 0; k < n_complex; ++k) {
    row[2 * k] = gp[k] + gq[k];
    row[2 * k + 1] = kI * (gp[k] - gq[k]);
  }
  return row;
}

// ---------------------------------------------------------------- rbm

RbmAnsatz::RbmAnsatz(int num_sites, int hidden)
    : Ansatz(ParameterPartition::single(
          "rbm", 2 * (Index{num_sites} + hidden + Index{hidden} * num_sites))),
      sites_(num_sites),
      hidden_(hidden) {
  if (num_sites < 1 || hidden < 1) {
    throw InvalidArgumentError("rbm needs sites >= 1 and hidden >= 1");
  }
}

std::unique_ptr<Ansatz> RbmAnsatz::clone() const {
  return std::make_unique<RbmAnsatz>(*this);
}

void RbmAnsatz::initialize(std::uint64_t seed) {
  CounterRng rng(seed, 0, 0, StreamPurpose::kParameterInit);
  const double sd = 0.01 / std::sqrt(double(sites_));
  fill_normal(complex_data(), num_parameters() / 2, sd, rng);
}

ComplexVector RbmAnsatz::theta(const SpinConfiguration &x) const {
  const Complex *p = complex_data();
  const Index m = hidden_;
  ComplexVector th = CVecMap(p + sites_, m);
  CMatMap w(p + sites_ + m, m, sites_);
  for (int i = 0; i < sites_; ++i) {
    if (x[i] > 0) {
      th += w.col(i);
    } else {
      th -= w.col(i);
    }
  }
  return th;
}

Complex RbmAnsatz::log_psi(const SpinConfiguration &x) const {
  check_sites(x);
  const Complex *a = complex_data();
  Complex out = 0.0;
  for (int i = 0; i < sites_; ++i) out += a[i] * static_cast<double>(x[i]);
  const ComplexVector th = theta(x);
  for (Index m = 0; m < th.size(); ++m) out += log_cosh(th[m]);
  require_finite(out, "rbm", x);
  return out;
}

ComplexVector RbmAnsatz::log_derivatives(const SpinConfiguration &x) const {
  check_sites(x);
  const Index m = hidden_;
  const ComplexVector tt =
      theta(x).unaryExpr([](Complex z) { return std::tanh(z); });
  ComplexVector g(num_parameters() / 2);
  for (int i = 0; i < sites_; ++i) g[i] = static_cast<double>(x[i]);
  g.segment(sites_, m) = tt;
  Eigen::Map<ComplexMatrix> dw(g.data() + sites_ + m, m, sites_);
  for (int i = 0; i < sites_; ++i) dw.col(i) = static_cast<double>(x[i]) * tt;
  require_finite(g, "rbm", x);
  ComplexVector row(num_parameters());
  scatter_holomorphic(g.data(), g.size(), row.data());
  return row;
}

}  // namespace vmc
