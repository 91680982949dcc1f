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

#ifndef VMC_ANSATZ_HPP
#define VMC_ANSATZ_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vmc/hilbert.hpp"
#include "vmc/types.hpp"

namespace vmc {

struct LayerSlice {
  std::string name;
  Index offset = 0;
  Index length = 0;
};

// Contiguous, non-overlapping named ranges covering [0, total).
class ParameterPartition {
 public:
  ParameterPartition() = default;
  explicit ParameterPartition(std::vector<LayerSlice> layers);

  static ParameterPartition from_lengths(
      const std::vector<std::pair<std::string, Index>> &lengths);
  static ParameterPartition single(std::string name, Index total);

  const std::vector<LayerSlice> &layers() const { return layers_; }
  std::size_t size() const { return layers_.size(); }
  Index total() const { return total_; }

  // Throws UnknownLayerError.
  const LayerSlice &layer(std::string_view name) const;

 private:
  std::vector<LayerSlice> layers_;
  Index total_ = 0;
};

// Sub-vector of a log-derivative row (or any parameter-space vector) that
// belongs to one layer.
ComplexVector slice_by_layer(const ComplexVector &row,
                             const ParameterPartition &partition,
                             std::string_view layer);
RealVector slice_by_layer(const RealVector &v,
                          const ParameterPartition &partition,
                          std::string_view layer);

// Variational log-wavefunction over real parameters. Complex weights are
// stored as interleaved (re, im) pairs; derivatives are reported per real
// component, so a holomorphic weight c contributes (d/dc, i d/dc).
class Ansatz {
 public:
  virtual ~Ansatz() = default;

  virtual std::string kind() const = 0;
  virtual int num_sites() const = 0;
  virtual std::unique_ptr<Ansatz> clone() const = 0;

  // Draws real and imaginary parts i.i.d. N(0, (0.01 / sqrt(fan_in))^2).
  virtual void initialize(std::uint64_t seed) = 0;

  virtual Complex log_psi(const SpinConfiguration &x) const = 0;
  virtual ComplexVector log_derivatives(const SpinConfiguration &x) const = 0;

  const ParameterPartition &partition() const { return partition_; }
  Index num_parameters() const { return params_.size(); }
  const RealVector &parameters() const { return params_; }
  void set_parameters(const RealVector &params);

 protected:
  explicit Ansatz(ParameterPartition partition);

  // Complex view of the interleaved parameter storage.
  const Complex *complex_data() const {
    return reinterpret_cast<const Complex *>(params_.data());
  }
  Complex *complex_data() { return reinterpret_cast<Complex *>(params_.data()); }

  void check_sites(const SpinConfiguration &x) const;

  ParameterPartition partition_;
  RealVector params_;
};

// log psi(x) = sum_i theta_i s_i with complex theta; sites are grouped into
// named layers in order. Mostly useful as an analytically solvable toy.
class LinearAnsatz final : public Ansatz {
 public:
  explicit LinearAnsatz(const std::vector<std::pair<std::string, int>> &layers);
  explicit LinearAnsatz(int num_sites);

  std::string kind() const override { return "linear"; }
  int num_sites() const override { return sites_; }
  std::unique_ptr<Ansatz> clone() const override;
  void initialize(std::uint64_t seed) override;
  Complex log_psi(const SpinConfiguration &x) const override;
  ComplexVector log_derivatives(const SpinConfiguration &x) const override;

 private:
  int sites_;
};

// Complex MLP with layers
//   embedding: h0 = W_e x + b_e                 (N -> H, linear)
//   encoder_k: h_k = h_{k-1} + tanh(W_k h_{k-1} + b_k)   (H -> H)
//   output:    log psi = w_o . h_K + b_o        (H -> 1)
// tanh acts on real and imaginary parts separately, so log psi is not
// holomorphic in the encoder and embedding weights.
class MlpAnsatz final : public Ansatz {
 public:
  MlpAnsatz(int num_sites, int hidden, int encoders);

  std::string kind() const override { return "mlp"; }
  int num_sites() const override { return sites_; }
  int hidden() const { return hidden_; }
  int encoders() const { return encoders_; }
  std::unique_ptr<Ansatz> clone() const override;
  void initialize(std::uint64_t seed) override;
  Complex log_psi(const SpinConfiguration &x) const override;
  ComplexVector log_derivatives(const SpinConfiguration &x) const override;

 private:
  // Offsets in complex units.
  Index embedding_offset() const { return 0; }
  Index encoder_offset(int k) const;
  Index output_offset() const;

  // Fills activations h_0..h_K and tanh outputs t_1..t_K; returns log psi.
  Complex forward(const SpinConfiguration &x, std::vector<ComplexVector> &h,
                  std::vector<ComplexVector> &t) const;

  int sites_;
  int hidden_;
  int encoders_;
};

// Complex RBM, log psi = a.x + sum_m log cosh(b_m + W_m . x). One layer.
class RbmAnsatz final : public Ansatz {
 public:
  RbmAnsatz(int num_sites, int hidden);

  std::string kind() const override { return "rbm"; }
  int num_sites() const override { return sites_; }
  int hidden() const { return hidden_; }
  std::unique_ptr<Ansatz> clone() const override;
  void initialize(std::uint64_t seed) override;
  Complex log_psi(const SpinConfiguration &x) const override;
  ComplexVector log_derivatives(const SpinConfiguration &x) const override;

 private:
  ComplexVector theta(const SpinConfiguration &x) const;

  int sites_;
  int hidden_;
};

// Numerically stable complex log(cosh(z)).
Complex log_cosh(Complex z);

}  // namespace vmc

#endif  // VMC_ANSATZ_HPP
