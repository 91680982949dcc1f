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

// Reference implementations used as oracles by the unit and acceptance
// tests. They share no code with the library beyond the Ansatz interface.

#ifndef VMC_TESTS_TEST_SUPPORT_HPP
#define VMC_TESTS_TEST_SUPPORT_HPP

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "vmc/ansatz.hpp"
#include "vmc/hilbert.hpp"

namespace oracle {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct Coupling {
  int i;
  int j;
  double j_value;
};

// Bonds listed by hand: chain i -> i+1, square (x+1, y), (x, y+1) and the
// diagonals (x+1, y+1), (x+1, y-1). Only for extents where no bond repeats.
inline std::vector<Coupling> chain_bonds(int length, double j1) {
  std::vector<Coupling> out;
  for (int i = 0; i < length; ++i) out.push_back({i, (i + 1) % length, j1});
  return out;
}

inline std::vector<Coupling> square_bonds(int l, double j1, double j2) {
  std::vector<Coupling> out;
  auto site = [l](int x, int y) { return ((x + l) % l) + l * ((y + l) % l); };
  for (int y = 0; y < l; ++y) {
    for (int x = 0; x < l; ++x) {
      out.push_back({site(x, y), site(x + 1, y), j1});
      out.push_back({site(x, y), site(x, y + 1), j1});
      if (j2 != 0.0) {
        out.push_back({site(x, y), site(x + 1, y + 1), j2});
        out.push_back({site(x, y), site(x + 1, y - 1), j2});
      }
    }
  }
  return out;
}

// Pauli action on bit i (bit set = spin up): X flips, Y flips with a phase,
// Z multiplies by +-1.
inline void apply_pauli(char p, int i, std::uint64_t &ket, cplx &amp) {
  const bool up = (ket >> i) & 1u;
  switch (p) {
    case 'X':
      ket ^= std::uint64_t{1} << i;
      break;
    case 'Y':  // Y|up> = i|down>, Y|down> = -i|up>
      amp *= up ? cplx(0, 1) : cplx(0, -1);
      ket ^= std::uint64_t{1} << i;
      break;
    case 'Z':
      amp *= up ? 1.0 : -1.0;
      break;
  }
}

// y = H v on the full 2^n space with H = scale * sum J (XX + YY + ZZ) / 4,
// built term by term from Pauli strings.
inline CVec apply_h(const std::vector<Coupling> &bonds, double scale, int n,
                    const CVec &v) {
  CVec y = CVec::Zero(v.size());
  for (std::uint64_t ket = 0; ket < (std::uint64_t{1} << n); ++ket) {
    const cplx c = v[static_cast<Eigen::Index>(ket)];
    if (c == 0.0) continue;
    for (const auto &b : bonds) {
      for (char p : {'X', 'Y', 'Z'}) {
        std::uint64_t k = ket;
        cplx amp = 0.25 * scale * b.j_value;
        apply_pauli(p, b.i, k, amp);
        apply_pauli(p, b.j, k, amp);
        y[static_cast<Eigen::Index>(k)] += amp * c;
      }
    }
  }
  return y;
}

inline CMat dense_h(const std::vector<Coupling> &bonds, double scale, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat h(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    CVec e = CVec::Zero(dim);
    e[k] = 1.0;
    h.col(k) = apply_h(bonds, scale, n, e);
  }
  return h;
}

inline bool in_sector(std::uint64_t ket, int n, int total) {
  return 2 * std::popcount(ket) - n == total;
}

// Sector block of H assembled from Pauli actions on single kets; rows follow
// ascending ket order.
struct SectorMatrix {
  std::vector<std::uint64_t> kets;
  Eigen::SparseMatrix<double> h;
};

inline SectorMatrix sector_hamiltonian(const std::vector<Coupling> &bonds,
                                       double scale, int n, int total) {
  SectorMatrix out;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    if (in_sector(k, n, total)) out.kets.push_back(k);
  }
  std::map<std::uint64_t, Eigen::Index> pos;
  for (std::size_t r = 0; r < out.kets.size(); ++r) pos[out.kets[r]] = Eigen::Index(r);
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t c = 0; c < out.kets.size(); ++c) {
    // XX and YY separately leave the sector on parallel pairs; only their sum
    // (zero there) is sector preserving.
    std::map<std::uint64_t, cplx> column;
    for (const auto &b : bonds) {
      for (char p : {'X', 'Y', 'Z'}) {
        std::uint64_t k = out.kets[c];
        cplx amp = 0.25 * scale * b.j_value;
        apply_pauli(p, b.i, k, amp);
        apply_pauli(p, b.j, k, amp);
        column[k] += amp;
      }
    }
    for (const auto &[k, amp] : column) {
      const auto it = pos.find(k);
      if (it == pos.end()) {
        if (std::abs(amp) > 1e-15) throw std::logic_error("H leaves the sector");
        continue;
      }
      trips.emplace_back(it->second, Eigen::Index(c), amp.real());
    }
  }
  const auto dim = Eigen::Index(out.kets.size());
  out.h.resize(dim, dim);
  out.h.setFromTriplets(trips.begin(), trips.end());
  return out;
}

// Lowest eigenvalue by power iteration on (c - H), c a Gershgorin bound,
// until the residual drops below tol. The Rayleigh quotient error is then of
// order tol^2 / gap.
inline double power_ground_energy(const Eigen::SparseMatrix<double> &h,
                                  double tol, int max_iter = 1000000) {
  double c = 0.0;
  for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
    double row = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(h, k); it; ++it) row += std::abs(it.value());
    c = std::max(c, row);
  }
  Eigen::VectorXd v(h.rows());
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[k] = 0.5 + double(state >> 11) * 0x1.0p-53;
  }
  v.normalize();
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd hv = h * v;
    const double e = v.dot(hv);
    if ((hv - e * v).norm() < tol) return e;
    v = c * v - hv;
    v.normalize();
  }
  return NAN;
}

inline vmc::SpinConfiguration config_of(std::uint64_t ket, int n) {
  std::vector<std::int8_t> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = ((ket >> i) & 1u) ? 1 : -1;
  return vmc::SpinConfiguration(std::move(s));
}

// Full-sector quantities by dense linear algebra on psi and its Jacobian
// dpsi_i(x) = O_i(x) psi(x), all over the 2^n space masked to a sector.
struct DenseState {
  CVec psi;  // unnormalized
  CMat jac;  // dim x Np
};

inline DenseState dense_state(const vmc::Ansatz &a, int total) {
  const int n = a.num_sites();
  const Eigen::Index dim = Eigen::Index{1} << n;
  DenseState d{CVec::Zero(dim), CMat::Zero(dim, a.num_parameters())};
  // Shift by the largest log-amplitude to avoid overflow.
  double shift = -1e300;
  std::vector<std::uint64_t> kets;
  for (std::uint64_t k = 0; k < std::uint64_t(dim); ++k) {
    if (in_sector(k, n, total)) {
      kets.push_back(k);
      shift = std::max(shift, a.log_psi(config_of(k, n)).real());
    }
  }
  for (auto k : kets) {
    const auto x = config_of(k, n);
    const cplx p = std::exp(a.log_psi(x) - shift);
    d.psi[Eigen::Index(k)] = p;
    d.jac.row(Eigen::Index(k)) = p * a.log_derivatives(x).transpose();
  }
  return d;
}

inline double dense_energy(const DenseState &d, const std::vector<Coupling> &bonds,
                           double scale, int n) {
  return d.psi.dot(apply_h(bonds, scale, n, d.psi)).real() / d.psi.squaredNorm();
}

// dE/dtheta_i = 2 Re <dpsi_i|(H - E)|psi> / <psi|psi>.
inline Eigen::VectorXd dense_force(const DenseState &d,
                                   const std::vector<Coupling> &bonds,
                                   double scale, int n) {
  const double norm = d.psi.squaredNorm();
  const double e = dense_energy(d, bonds, scale, n);
  const CVec r = apply_h(bonds, scale, n, d.psi) - e * d.psi;
  return 2.0 * (d.jac.adjoint() * r).real() / norm;
}

// S_ij = <dpsi_i|dpsi_j>/<psi|psi> - <dpsi_i|psi><psi|dpsi_j>/<psi|psi>^2.
inline CMat dense_qgt(const DenseState &d) {
  const double norm = d.psi.squaredNorm();
  const CVec b = d.jac.adjoint() * d.psi / norm;
  return d.jac.adjoint() * d.jac / norm - b * b.adjoint();
}

// log psi given by a table over a sector; zero parameters.
class TableAnsatz final : public vmc::Ansatz {
 public:
  TableAnsatz(const vmc::Sector &sector, const vmc::ComplexVector &amplitudes)
      : vmc::Ansatz(vmc::ParameterPartition::single("none", 0)), sector_(sector) {
    log_.resize(amplitudes.size());
    for (vmc::Index k = 0; k < amplitudes.size(); ++k) log_[k] = std::log(amplitudes[k]);
  }
  std::string kind() const override { return "table"; }
  int num_sites() const override { return sector_.num_sites(); }
  std::unique_ptr<vmc::Ansatz> clone() const override {
    return std::make_unique<TableAnsatz>(*this);
  }
  void initialize(std::uint64_t) override {}
  vmc::Complex log_psi(const vmc::SpinConfiguration &x) const override {
    const auto pos = sector_.position(vmc::encode(x));
    return pos ? log_[vmc::Index(*pos)] : vmc::Complex(-1e4, 0.0);
  }
  vmc::ComplexVector log_derivatives(const vmc::SpinConfiguration &) const override {
    return vmc::ComplexVector();
  }

 private:
  vmc::Sector sector_;
  vmc::ComplexVector log_;
};

}  // namespace oracle

#endif  // VMC_TESTS_TEST_SUPPORT_HPP
