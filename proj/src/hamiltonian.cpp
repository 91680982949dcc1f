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

#include "vmc/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "vmc/ansatz.hpp"
#include "vmc/errors.hpp"

namespace vmc {

void LatticeGeometry::add_bond(std::vector<Bond> &bonds, int i, int j) {
  if (i == j) return;
  const Bond b{std::min(i, j), std::max(i, j)};
  if (std::find(bonds.begin(), bonds.end(), b) == bonds.end()) {
    bonds.push_back(b);
  }
}

LatticeGeometry LatticeGeometry::chain(int length, bool periodic) {
  if (length < 2 || length > kMaxSites) {
    throw InvalidArgumentError("chain length must be in [2, " +
                               std::to_string(kMaxSites) + "]");
  }
  LatticeGeometry g(LatticeKind::kChain, length, 1, periodic);
  for (int i = 0; i + 1 < length; ++i) g.add_bond(g.nn_, i, i + 1);
  if (periodic) g.add_bond(g.nn_, length - 1, 0);
  return g;
}

LatticeGeometry LatticeGeometry::square(int lx, int ly, bool periodic) {
  if (lx < 2 || ly < 2 || lx * ly > kMaxSites) {
    throw InvalidArgumentError("square lattice extents out of range");
  }
  LatticeGeometry g(LatticeKind::kSquare, lx, ly, periodic);
  auto site = [&](int x, int y) -> int {
    if (periodic) {
      x = ((x % lx) + lx) % lx;
      y = ((y % ly) + ly) % ly;
    } else if (x < 0 || x >= lx || y < 0 || y >= ly) {
      return -1;
    }
    return x + lx * y;
  };
  for (int y = 0; y < ly; ++y) {
    for (int x = 0; x < lx; ++x) {
      const int i = site(x, y);
      for (int j : {site(x + 1, y), site(x, y + 1)}) {
        if (j >= 0) g.add_bond(g.nn_, i, j);
      }
      for (int j : {site(x + 1, y + 1), site(x + 1, y - 1)}) {
        if (j >= 0) g.add_bond(g.nnn_, i, j);
      }
    }
  }
  return g;
}

int LatticeGeometry::sublattice(int site) const {
  return (site % lx_ + site / lx_) % 2;
}

bool LatticeGeometry::bipartite() const {
  return std::all_of(nn_.begin(), nn_.end(), [&](const Bond &b) {
    return sublattice(b.i) != sublattice(b.j);
  });
}

std::string LatticeGeometry::describe() const {
  std::string s = kind_ == LatticeKind::kChain
                      ? "chain L=" + std::to_string(lx_)
                      : "square " + std::to_string(lx_) + "x" +
                            std::to_string(ly_);
  return s + (periodic_ ? " pbc" : " obc");
}

SpinHamiltonian::SpinHamiltonian(LatticeGeometry geometry, double j1,
                                 double j2, double unit_scale, bool sign_rule)
    : geometry_(std::move(geometry)),
      j1_(j1),
      j2_(j2),
      unit_scale_(unit_scale),
      sign_rule_(sign_rule) {
  if (!(unit_scale_ > 0.0) || !std::isfinite(unit_scale_)) {
    throw InvalidArgumentError("unit_scale must be positive and finite");
  }
  if (sign_rule_ && !geometry_.bipartite()) {
    throw InvalidArgumentError("sign rule requires a bipartite lattice, got " +
                               geometry_.describe());
  }
  // S_i.S_j = s_i s_j / 4 on the diagonal plus (S+S- + S-S+)/2, which swaps
  // antialigned spins with amplitude 1/2.
  auto add = [&](const std::vector<Bond> &bonds, double j) {
    if (j == 0.0) return;
    for (const auto &b : bonds) {
      double exchange = unit_scale_ * j / 2.0;
      if (sign_rule_ && geometry_.sublattice(b.i) != geometry_.sublattice(b.j)) {
        exchange = -exchange;
      }
      couplings_.push_back({b, unit_scale_ * j / 4.0, exchange});
    }
  };
  add(geometry_.nn_bonds(), j1_);
  add(geometry_.nnn_bonds(), j2_);
}

std::vector<ConnectedElement> SpinHamiltonian::connected(
    const SpinConfiguration &x) const {
  if (x.size() != num_sites()) {
    throw InvalidArgumentError("configuration has " +
                               std::to_string(x.size()) + " sites, expected " +
                               std::to_string(num_sites()));
  }
  struct Entry {
    std::uint64_t index;
    double amplitude;
  };
  const std::uint64_t self = encode(x).value;
  std::vector<Entry> entries;
  entries.reserve(couplings_.size() + 1);
  double diagonal = 0.0;
  for (const auto &c : couplings_) {
    const int si = x[c.bond.i];
    const int sj = x[c.bond.j];
    diagonal += c.diagonal * si * sj;
    if (si != sj) {
      const std::uint64_t flip =
          (std::uint64_t{1} << c.bond.i) | (std::uint64_t{1} << c.bond.j);
      entries.push_back({self ^ flip, c.exchange});
    }
  }
  entries.push_back({self, diagonal});
  std::sort(entries.begin(), entries.end(),
            [](const Entry &a, const Entry &b) { return a.index < b.index; });

  std::vector<ConnectedElement> out;
  out.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    double amp = 0.0;
    const std::uint64_t idx = entries[k].index;
    for (; k < entries.size() && entries[k].index == idx; ++k) {
      amp += entries[k].amplitude;
    }
    if (amp != 0.0) {
      out.push_back({decode(BasisIndex{idx}, num_sites()), amp});
    }
  }
  return out;
}

Eigen::SparseMatrix<double> sector_matrix(const SpinHamiltonian &h,
                                          const Sector &sector) {
  if (sector.num_sites() != h.num_sites()) {
    throw InvalidArgumentError("sector and Hamiltonian site counts differ");
  }
  const auto dim = static_cast<Index>(sector.dimension());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(sector.dimension() * 8);
  for (std::size_t r = 0; r < sector.dimension(); ++r) {
    for (const auto &el : h.connected(sector.configuration(r))) {
      const auto c = sector.position(encode(el.config));
      if (!c) {
        throw InvalidSectorError("Hamiltonian leaves the magnetization sector");
      }
      triplets.emplace_back(static_cast<Index>(r), static_cast<Index>(*c),
                            el.amplitude);
    }
  }
  Eigen::SparseMatrix<double> m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Complex local_energy(const SpinHamiltonian &h, const Ansatz &psi,
                     const SpinConfiguration &x) {
  return local_energy(h, psi, x, psi.log_psi(x));
}

Complex local_energy(const SpinHamiltonian &h, const Ansatz &psi,
                     const SpinConfiguration &x, Complex log_psi_x) {
  if (!(log_psi_x.real() > kLogAmplitudeFloor)) {
    throw DegenerateAmplitudeError("psi(x) vanishes at configuration " +
                                   x.to_string());
  }
  Complex e = 0.0;
  for (const auto &el : h.connected(x)) {
    if (el.config == x) {
      e += el.amplitude;
    } else {
      e += el.amplitude * std::exp(psi.log_psi(el.config) - log_psi_x);
    }
  }
  return e;
}

}  // namespace vmc
