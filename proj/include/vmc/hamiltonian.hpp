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

#ifndef VMC_HAMILTONIAN_HPP
#define VMC_HAMILTONIAN_HPP

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "vmc/hilbert.hpp"
#include "vmc/types.hpp"

namespace vmc {

class Ansatz;

enum class LatticeKind { kChain, kSquare };

struct Bond {
  int i = 0;
  int j = 0;
  friend bool operator==(const Bond &, const Bond &) = default;
};

// Sites are numbered x + lx * y. Bond lists are deduplicated as unordered
// pairs, so tiny periodic lattices (extent 2) carry each bond once.
class LatticeGeometry {
 public:
  static LatticeGeometry chain(int length, bool periodic = true);
  // Nearest-neighbour bonds along x and y; next-nearest bonds along the two
  // diagonals (i, i + x + y) and (i, i + x - y).
  static LatticeGeometry square(int lx, int ly, bool periodic = true);

  LatticeKind kind() const { return kind_; }
  int lx() const { return lx_; }
  int ly() const { return ly_; }
  bool periodic() const { return periodic_; }
  int num_sites() const { return lx_ * ly_; }
  const std::vector<Bond> &nn_bonds() const { return nn_; }
  const std::vector<Bond> &nnn_bonds() const { return nnn_; }

  // Checkerboard sublattice (0 or 1).
  int sublattice(int site) const;
  // True when every nearest-neighbour bond joins opposite sublattices.
  bool bipartite() const;

  std::string describe() const;

 private:
  LatticeGeometry(LatticeKind kind, int lx, int ly, bool periodic)
      : kind_(kind), lx_(lx), ly_(ly), periodic_(periodic) {}
  void add_bond(std::vector<Bond> &bonds, int i, int j);

  LatticeKind kind_;
  int lx_;
  int ly_;
  bool periodic_;
  std::vector<Bond> nn_;
  std::vector<Bond> nnn_;
};

// <x|H|x'> for one connected configuration x'.
struct ConnectedElement {
  SpinConfiguration config;
  double amplitude = 0.0;
};

// H = unit_scale * (j1 sum_<ij> S_i.S_j + j2 sum_<<ij>> S_i.S_j), S = sigma/2.
// unit_scale = 4 gives the Pauli sigma.sigma normalization. With sign_rule
// the Marshall rotation flips the sign of exchange terms across sublattices.
class SpinHamiltonian {
 public:
  SpinHamiltonian(LatticeGeometry geometry, double j1, double j2,
                  double unit_scale = 1.0, bool sign_rule = false);

  const LatticeGeometry &geometry() const { return geometry_; }
  int num_sites() const { return geometry_.num_sites(); }
  double j1() const { return j1_; }
  double j2() const { return j2_; }
  double unit_scale() const { return unit_scale_; }
  bool sign_rule() const { return sign_rule_; }

  // Nonzero matrix elements of row x, merged per configuration and ordered by
  // ascending BasisIndex.
  std::vector<ConnectedElement> connected(const SpinConfiguration &x) const;

 private:
  struct Coupling {
    Bond bond;
    double diagonal;
    double exchange;
  };

  LatticeGeometry geometry_;
  double j1_;
  double j2_;
  double unit_scale_;
  bool sign_rule_;
  std::vector<Coupling> couplings_;
};

// Sparse matrix of h restricted to a magnetization sector.
Eigen::SparseMatrix<double> sector_matrix(const SpinHamiltonian &h,
                                          const Sector &sector);

// Threshold on Re log psi below which an amplitude is treated as zero.
inline constexpr double kLogAmplitudeFloor = -700.0;

// E_loc(x) = sum_x' <x|H|x'> psi(x') / psi(x).
Complex local_energy(const SpinHamiltonian &h, const Ansatz &psi,
                     const SpinConfiguration &x);
// Same, with log psi(x) already known.
Complex local_energy(const SpinHamiltonian &h, const Ansatz &psi,
                     const SpinConfiguration &x, Complex log_psi_x);

}  // namespace vmc

#endif  // VMC_HAMILTONIAN_HPP
