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

#ifndef VMC_DIAGNOSTICS_HPP
#define VMC_DIAGNOSTICS_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "json.hpp"
#include "vmc/estimators.hpp"
#include "vmc/types.hpp"

namespace vmc {

enum class Correlation { kPearson, kSpearman };

// Regularized pseudo-inverse together with its spectrum.
struct RegularizedInverse {
  ComplexMatrix matrix;
  RealVector eigenvalues;  // of `matrix`, descending; discarded modes are 0
  Index retained = 0;
};

// Inverts the eigenvalues of S + lambda I above rcond * max and zeroes the
// rest. Block metrics are inverted block by block and assembled.
RegularizedInverse regularized_inverse_with_spectrum(const QgtMatrix &s,
                                                     double lambda,
                                                     double rcond);
RegularizedInverse regularized_inverse_with_spectrum(const BlockQgt &s,
                                                     double lambda,
                                                     double rcond);
ComplexMatrix regularized_inverse(const QgtMatrix &s, double lambda,
                                  double rcond);
ComplexMatrix regularized_inverse(const BlockQgt &s, double lambda,
                                  double rcond);

// Re Tr[A^dag B] / (|A|_F |B|_F).
double frobenius_overlap(const ComplexMatrix &a, const ComplexMatrix &b);
// |A - B|_F / |B|_F.
double frobenius_rel_error(const ComplexMatrix &a, const ComplexMatrix &b);
// Largest over smallest eigenvalue magnitude among those above
// rcond * largest.
double condition_number(const ComplexMatrix &a, double rcond = 0.0);
double condition_number_of_spectrum(const RealVector &eigenvalues,
                                    double rcond);
// Correlation of the two descending-sorted spectra.
double spectral_correlation(const ComplexMatrix &a, const ComplexMatrix &b,
                            Correlation kind = Correlation::kPearson);
double spectrum_correlation(RealVector a, RealVector b,
                            Correlation kind = Correlation::kPearson);

struct DiagnosticsReport {
  std::string label;  // e.g. "block_vs_exact"
  double frobenius_overlap = 0.0;
  double frobenius_rel_error = 0.0;
  double condition_number_A = 0.0;
  double condition_number_B = 0.0;
  double spectral_correlation = 0.0;
  Index effective_rank_A = 0;
  Index effective_rank_B = 0;
  double lambda_used = 0.0;
  double rcond_used = 0.0;
  std::string correlation = "pearson";
  // Run metadata.
  std::int64_t epoch = -1;
  Index num_samples = 0;
  std::string sampling;
  Index num_parameters = 0;

  // Throws InvalidArgumentError naming the violated range invariant.
  void check_ranges() const;
};

// (inverse block vs inverse exact, inverse full vs inverse exact).
std::pair<DiagnosticsReport, DiagnosticsReport> compare(
    const BlockQgt &block, const QgtMatrix &full, const QgtMatrix &exact,
    double lambda, double rcond, Correlation kind = Correlation::kPearson);

nlohmann::json to_json(const DiagnosticsReport &r);
DiagnosticsReport report_from_json(const nlohmann::json &j);

// Aligned text table with one row per metric and one column per report.
std::string render_table(const DiagnosticsReport &block,
                         const DiagnosticsReport &full);

}  // namespace vmc

#endif  // VMC_DIAGNOSTICS_HPP
