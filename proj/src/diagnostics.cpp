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

#include "vmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "vmc/errors.hpp"

namespace vmc {

namespace {

struct HermitianInverse {
  ComplexMatrix matrix;
  RealVector eigenvalues;
  Index retained = 0;
};

HermitianInverse invert_hermitian(const ComplexMatrix &s, double lambda,
                                  double rcond) {
  if (s.rows() != s.cols()) {
    throw InvalidArgumentError("regularized inverse needs a square matrix");
  }
  HermitianInverse out;
  const Index n = s.rows();
  if (n == 0) return out;
  ComplexMatrix shifted = s;
  shifted.diagonal().array() += lambda;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(shifted);
  if (eig.info() != Eigen::Success) {
    throw SolverError("eigendecomposition failed in regularized inverse");
  }
  const RealVector &ev = eig.eigenvalues();
  const double cut = rcond * ev.maxCoeff();
  RealVector inv = RealVector::Zero(n);
  for (Index k = 0; k < n; ++k) {
    if (ev[k] > cut && ev[k] > 0.0) {
      inv[k] = 1.0 / ev[k];
      ++out.retained;
    }
  }
  const ComplexMatrix &v = eig.eigenvectors();
  out.matrix = v * inv.cast<Complex>().asDiagonal() * v.adjoint();
  out.eigenvalues = inv;
  return out;
}

RealVector sorted_descending(RealVector v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<double>());
  return v;
}

RealVector ranks(const RealVector &v) {
  // Average ranks for ties.
  const Index n = v.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return v[a] < v[b]; });
  RealVector r(n);
  for (Index i = 0; i < n;) {
    Index j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * double(i + j);
    for (Index k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

double pearson(const RealVector &a, const RealVector &b) {
  const RealVector da = a.array() - a.mean();
  const RealVector db = b.array() - b.mean();
  const double na = da.norm();
  const double nb = db.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw UndefinedMetricError("correlation of a constant spectrum");
  }
  return std::clamp(da.dot(db) / (na * nb), -1.0, 1.0);
}

}  // namespace

RegularizedInverse regularized_inverse_with_spectrum(const QgtMatrix &s,
                                                     double lambda,
                                                     double rcond) {
  HermitianInverse h = invert_hermitian(s.entries, lambda, rcond);
  return {std::move(h.matrix), sorted_descending(h.eigenvalues), h.retained};
}

RegularizedInverse regularized_inverse_with_spectrum(const BlockQgt &s,
                                                     double lambda,
                                                     double rcond) {
  const Index n = s.total();
  RegularizedInverse out;
  out.matrix = ComplexMatrix::Zero(n, n);
  out.eigenvalues.resize(n);
  Index at = 0;
  for (const auto &b : s.blocks) {
    HermitianInverse h = invert_hermitian(b.entries, lambda, rcond);
    const Index len = b.entries.rows();
    out.matrix.block(at, at, len, len) = h.matrix;
    out.eigenvalues.segment(at, len) = h.eigenvalues;
    out.retained += h.retained;
    at += len;
  }
  out.eigenvalues = sorted_descending(out.eigenvalues);
  return out;
}

ComplexMatrix regularized_inverse(const QgtMatrix &s, double lambda,
                                  double rcond) {
  return regularized_inverse_with_spectrum(s, lambda, rcond).matrix;
}

ComplexMatrix regularized_inverse(const BlockQgt &s, double lambda,
                                  double rcond) {
  return regularized_inverse_with_spectrum(s, lambda, rcond).matrix;
}

double frobenius_overlap(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgumentError("frobenius_overlap: shape mismatch");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw UndefinedMetricError("frobenius_overlap of a zero matrix");
  }
  // Tr[A^dag B] = sum conj(A_ij) B_ij.
  const Complex tr = (a.conjugate().array() * b.array()).sum();
  return std::clamp(tr.real() / (na * nb), -1.0, 1.0);
}

double frobenius_rel_error(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgumentError("frobenius_rel_error: shape mismatch");
  }
  const double nb = b.norm();
  if (!(nb > 0.0)) {
    throw UndefinedMetricError("frobenius_rel_error against a zero matrix");
  }
  return (a - b).norm() / nb;
}

double condition_number_of_spectrum(const RealVector &eigenvalues,
                                    double rcond) {
  if (eigenvalues.size() == 0) {
    throw UndefinedMetricError("condition number of an empty matrix");
  }
  const RealVector mags = eigenvalues.cwiseAbs();
  const double top = mags.maxCoeff();
  const double cut = rcond * top;
  double low = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < mags.size(); ++k) {
    if (mags[k] > cut && mags[k] > 0.0) low = std::min(low, mags[k]);
  }
  if (!std::isfinite(low)) {
    throw UndefinedMetricError("all eigenvalues fall below the cutoff");
  }
  return top / low;
}

double condition_number(const ComplexMatrix &a, double rcond) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw SolverError("eigendecomposition failed in condition_number");
  }
  return condition_number_of_spectrum(eig.eigenvalues(), rcond);
}

double spectrum_correlation(RealVector a, RealVector b, Correlation kind) {
  if (a.size() != b.size() || a.size() < 2) {
    throw InvalidArgumentError("spectra must have equal length >= 2");
  }
  a = sorted_descending(std::move(a));
  b = sorted_descending(std::move(b));
  if (kind == Correlation::kSpearman) return pearson(ranks(a), ranks(b));
  return pearson(a, b);
}

double spectral_correlation(const ComplexMatrix &a, const ComplexMatrix &b,
                            Correlation kind) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgumentError("spectral_correlation: shape mismatch");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ea(a, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eb(b, Eigen::EigenvaluesOnly);
  if (ea.info() != Eigen::Success || eb.info() != Eigen::Success) {
    throw SolverError("eigendecomposition failed in spectral_correlation");
  }
  return spectrum_correlation(ea.eigenvalues(), eb.eigenvalues(), kind);
}

void DiagnosticsReport::check_ranges() const {
  auto fail = [&](const std::string &what) {
    throw InvalidArgumentError("report '" + label + "': " + what);
  };
  if (!(frobenius_overlap >= -1.0 && frobenius_overlap <= 1.0)) {
    fail("overlap outside [-1, 1]");
  }
  if (!(frobenius_rel_error >= 0.0)) fail("negative relative error");
  if (!(condition_number_A >= 1.0) || !(condition_number_B >= 1.0)) {
    fail("condition number below 1");
  }
  if (!(spectral_correlation >= -1.0 && spectral_correlation <= 1.0)) {
    fail("spectral correlation outside [-1, 1]");
  }
}

namespace {

DiagnosticsReport make_report(const std::string &label,
                              const RegularizedInverse &a,
                              const RegularizedInverse &b, double lambda,
                              double rcond, Correlation kind) {
  DiagnosticsReport r;
  r.label = label;
  r.frobenius_overlap = frobenius_overlap(a.matrix, b.matrix);
  r.frobenius_rel_error = frobenius_rel_error(a.matrix, b.matrix);
  r.condition_number_A = condition_number_of_spectrum(a.eigenvalues, 0.0);
  r.condition_number_B = condition_number_of_spectrum(b.eigenvalues, 0.0);
  r.spectral_correlation = spectrum_correlation(a.eigenvalues, b.eigenvalues, kind);
  r.effective_rank_A = a.retained;
  r.effective_rank_B = b.retained;
  r.lambda_used = lambda;
  r.rcond_used = rcond;
  r.correlation = kind == Correlation::kPearson ? "pearson" : "spearman";
  r.num_parameters = a.matrix.rows();
  return r;
}

}  // namespace

std::pair<DiagnosticsReport, DiagnosticsReport> compare(
    const BlockQgt &block, const QgtMatrix &full, const QgtMatrix &exact,
    double lambda, double rcond, Correlation kind) {
  if (block.total() != full.size() || full.size() != exact.size()) {
    throw InvalidArgumentError("compare: metrics have different sizes");
  }
  const auto inv_exact = regularized_inverse_with_spectrum(exact, lambda, rcond);
  const auto inv_block = regularized_inverse_with_spectrum(block, lambda, rcond);
  const auto inv_full = regularized_inverse_with_spectrum(full, lambda, rcond);
  return {make_report("block_vs_exact", inv_block, inv_exact, lambda, rcond, kind),
          make_report("full_vs_exact", inv_full, inv_exact, lambda, rcond, kind)};
}

nlohmann::json to_json(const DiagnosticsReport &r) {
  return {
      {"label", r.label},
      {"frobenius_overlap", r.frobenius_overlap},
      {"frobenius_rel_error", r.frobenius_rel_error},
      {"condition_number_A", r.condition_number_A},
      {"condition_number_B", r.condition_number_B},
      {"spectral_correlation", r.spectral_correlation},
      {"effective_rank_A", r.effective_rank_A},
      {"effective_rank_B", r.effective_rank_B},
      {"lambda_used", r.lambda_used},
      {"rcond_used", r.rcond_used},
      {"correlation", r.correlation},
      {"epoch", r.epoch},
      {"num_samples", r.num_samples},
      {"sampling", r.sampling},
      {"num_parameters", r.num_parameters},
  };
}

DiagnosticsReport report_from_json(const nlohmann::json &j) {
  try {
    DiagnosticsReport r;
    j.at("label").get_to(r.label);
    j.at("frobenius_overlap").get_to(r.frobenius_overlap);
    j.at("frobenius_rel_error").get_to(r.frobenius_rel_error);
    j.at("condition_number_A").get_to(r.condition_number_A);
    j.at("condition_number_B").get_to(r.condition_number_B);
    j.at("spectral_correlation").get_to(r.spectral_correlation);
    j.at("effective_rank_A").get_to(r.effective_rank_A);
    j.at("effective_rank_B").get_to(r.effective_rank_B);
    j.at("lambda_used").get_to(r.lambda_used);
    j.at("rcond_used").get_to(r.rcond_used);
    j.at("correlation").get_to(r.correlation);
    j.at("epoch").get_to(r.epoch);
    j.at("num_samples").get_to(r.num_samples);
    j.at("sampling").get_to(r.sampling);
    j.at("num_parameters").get_to(r.num_parameters);
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw IoError(std::string("malformed diagnostics record: ") + e.what());
  }
}

std::string render_table(const DiagnosticsReport &block,
                         const DiagnosticsReport &full) {
  auto fmt = [](double v, const char *spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return std::string(buf);
  };
  struct Row {
    std::string name;
    std::string a;
    std::string b;
  };
  const std::vector<Row> rows = {
      {"Frobenius overlap (up)", fmt(block.frobenius_overlap, "%.3f"),
       fmt(full.frobenius_overlap, "%.3f")},
      {"Frobenius relative error (down)", fmt(block.frobenius_rel_error, "%.3f"),
       fmt(full.frobenius_rel_error, "%.3f")},
      {"Condition number (down)", fmt(block.condition_number_A, "%.3e"),
       fmt(full.condition_number_A, "%.3e")},
      {"Eigenvalue spectral correlation (up)",
       fmt(block.spectral_correlation, "%.3f"),
       fmt(full.spectral_correlation, "%.3f")},
      {"Effective rank", std::to_string(block.effective_rank_A),
       std::to_string(full.effective_rank_A)},
  };
  std::size_t w0 = 6, w1 = 20, w2 = 13;
  for (const auto &r : rows) w0 = std::max(w0, r.name.size());
  std::ostringstream out;
  auto line = [&](const std::string &a, const std::string &b,
                  const std::string &c) {
    out << a << std::string(w0 - a.size() + 2, ' ') << b
        << std::string(w1 > b.size() ? w1 - b.size() + 2 : 2, ' ') << c << '\n';
  };
  line("Metric", "Block-layer vs Exact", "Full vs Exact");
  out << std::string(w0 + w1 + w2 + 4, '-') << '\n';
  for (const auto &r : rows) line(r.name, r.a, r.b);
  out << "# exact-metric condition number " << fmt(block.condition_number_B, "%.3e")
      << ", lambda=" << fmt(block.lambda_used, "%g")
      << ", rcond=" << fmt(block.rcond_used, "%g")
      << ", correlation=" << block.correlation << '\n';
  return out.str();
}

}  // namespace vmc
