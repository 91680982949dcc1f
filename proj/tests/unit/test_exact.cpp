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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "test_support.hpp"
#include "vmc/ansatz.hpp"
#include "vmc/errors.hpp"
#include "vmc/estimators.hpp"
#include "vmc/exact.hpp"
#include "vmc/hamiltonian.hpp"
#include "vmc/sampler.hpp"

using namespace vmc;

namespace {

SpinHamiltonian chain(int l, double scale = 1.0) {
  return SpinHamiltonian(LatticeGeometry::chain(l), 1.0, 0.0, scale);
}

RealVector random_parameters(Index np, double scale, std::uint64_t seed) {
  CounterRng rng(seed, 0, 0, StreamPurpose::kTest);
  RealVector t(np);
  for (Index k = 0; k < np; ++k) t[k] = scale * rng.normal();
  return t;
}

void check_eigenpair(const SpinHamiltonian &h, const Sector &s, const GroundStateResult &r) {
  const Eigen::SparseMatrix<double> m = sector_matrix(h, s);
  const RealVector v = r.vector.real();
  CHECK(r.vector.imag().norm() == 0.0);
  CHECK(std::abs(r.vector.norm() - 1.0) < 1e-12);
  CHECK((m * v - r.energy * v).norm() < 1e-8);
}

LanczosOptions force_lanczos() {
  LanczosOptions o;
  o.dense_threshold = 0;
  return o;
}

}  // namespace

TEST_CASE("two-site singlet") {
  const Sector s(2, 0);
  const auto r = ground_state(chain(2), s);
  CHECK(r.energy == -0.75);
  CHECK(r.method == "dense");
  check_eigenpair(chain(2), s, r);
}

TEST_CASE("L=4 periodic chain") {
  const Sector s(4, 0);
  for (const auto &opts : {LanczosOptions{}, force_lanczos()}) {
    const auto r = ground_state(chain(4), s, opts);
    CHECK(std::abs(r.energy + 2.0) < 1e-10);
    check_eigenpair(chain(4), s, r);
  }
  CHECK(ground_state(chain(4), s, force_lanczos()).method == "lanczos");
}

TEST_CASE("chains agree with the Pauli-string oracle") {
  for (int n : {6, 8, 10, 12}) {
    const Sector s(n, 0);
    const auto oracle_h = oracle::sector_hamiltonian(oracle::chain_bonds(n, 1.0), 1.0, n, 0);
    const double e_ref = oracle::power_ground_energy(oracle_h.h, 1e-7);
    const auto dense = ground_state(chain(n), s);
    const auto lanczos = ground_state(chain(n), s, force_lanczos());
    INFO("L = " << n);
    CHECK(std::abs(dense.energy - e_ref) < 1e-10);
    CHECK(std::abs(lanczos.energy - e_ref) < 1e-10);
    check_eigenpair(chain(n), s, lanczos);
    // Same state up to sign.
    CHECK(infidelity(dense.vector, lanczos.vector) < 1e-12);
  }
}

TEST_CASE("4x4 J1-J2 at j2 = 0.5 against the independent construction") {
  const SpinHamiltonian h(LatticeGeometry::square(4, 4), 1.0, 0.5);
  const Sector s(16, 0);
  const auto r = ground_state(h, s);
  CHECK(r.method == "lanczos");
  check_eigenpair(h, s, r);
  const auto oracle_h = oracle::sector_hamiltonian(oracle::square_bonds(4, 1.0, 0.5), 1.0, 16, 0);
  const double e_ref = oracle::power_ground_energy(oracle_h.h, 1e-6);
  INFO("library " << r.energy << ", oracle " << e_ref);
  CHECK(std::abs(r.energy - e_ref) < 1e-8);
}

TEST_CASE("L=16 chain at unit scale 4 lies below the variational benchmark") {
  const auto r = ground_state(chain(16, 4.0), Sector(16, 0));
  INFO("E0 = " << r.energy);
  CHECK(r.energy <= -28.5685);
  check_eigenpair(chain(16, 4.0), Sector(16, 0), r);
  // Four times the unit-scale-1 value.
  CHECK(std::abs(r.energy - 4 * ground_state(chain(16), Sector(16, 0)).energy) < 1e-9);
}

TEST_CASE("Lanczos reports non-convergence") {
  LanczosOptions o = force_lanczos();
  o.max_iterations = 3;
  o.max_restarts = 0;
  CHECK_THROWS_WITH_AS(ground_state(chain(12), Sector(12, 0), o),
                       doctest::Contains("residual"), OracleError);
}

TEST_CASE("exact QGT") {
  SUBCASE("equals the estimator on an exact-mode batch") {
    MlpAnsatz psi(8, 4, 1);
    psi.set_parameters(random_parameters(psi.num_parameters(), 0.3, 1));
    const Sector s(8, 0);
    const ComplexMatrix a = exact_qgt(psi, s).entries;
    const ComplexMatrix b = qgt_full(sample_exact(psi, chain(8), s)).entries;
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(exact_qgt(psi, s, 3).entries == a);
  }
  SUBCASE("constant state: spin covariances over the uniform sector") {
    // Var(s_i) = 1 and Cov(s_i, s_j) = -1/(n-1) for i != j; the real and
    // imaginary components of a holomorphic parameter give [[c, ic], [-ic, c]].
    const int n = 6;
    LinearAnsatz psi(n);
    const ComplexMatrix s = exact_qgt(psi, Sector(n, 0)).entries;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double c = i == j ? 1.0 : -1.0 / (n - 1);
        ComplexMatrix expect(2, 2);
        expect << c, Complex(0, c), Complex(0, -c), c;
        worst = std::max(worst, (s.block(2 * i, 2 * j, 2, 2) - expect).cwiseAbs().maxCoeff());
      }
    }
    CHECK(worst < 1e-14);
  }
}

TEST_CASE("infidelity") {
  MlpAnsatz psi(8, 4, 1);
  psi.set_parameters(random_parameters(psi.num_parameters(), 0.3, 2));
  const Sector s(8, 0);
  const ComplexVector v = materialize(psi, s);
  CHECK(std::abs(v.norm() - 1.0) < 1e-14);
  CHECK(infidelity(psi, v, s) < 1e-12);

  // Orthogonal reference by Gram-Schmidt against a random vector.
  const RealVector re = random_parameters(Index(s.dimension()), 1.0, 3);
  const RealVector im = random_parameters(Index(s.dimension()), 1.0, 4);
  ComplexVector w(re.size());
  w.real() = re;
  w.imag() = im;
  w -= v * v.dot(w);
  CHECK(std::abs(infidelity(psi, w, s) - 1.0) < 1e-12);
  const double mid = infidelity(psi, w + v, s);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);

  // Global phase and scale: shift the output bias by a complex constant.
  RealVector theta = psi.parameters();
  const auto &out = psi.partition().layers().back();
  const double before = infidelity(psi, w + v, s);
  theta[out.offset + out.length - 2] += 3.7;
  theta[out.offset + out.length - 1] -= 1.9;
  psi.set_parameters(theta);
  CHECK(std::abs(infidelity(psi, w + v, s) - before) < 1e-12);

  CHECK_THROWS_AS(infidelity(v, ComplexVector::Zero(v.size())), DegenerateStateError);
  CHECK_THROWS_AS(infidelity(psi, ComplexVector::Ones(3), s), InvalidArgumentError);
}

TEST_CASE("materialize rejects a vanishing state") {
  LinearAnsatz psi(4);
  RealVector t = RealVector::Zero(8);
  t[0] = NAN;
  psi.set_parameters(t);
  CHECK_THROWS_AS(materialize(psi, Sector(4, 0)), DegenerateStateError);
}
