// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#include "qdeg/entropy.hpp"

#include <cmath>

namespace qdeg {

double spectrum_entropy(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > kEntropyEigCutoff) sum -= lam * std::log2(lam);
  }
  return sum;
}

double von_neumann_entropy(const DensityOperator& rho) {
  return spectrum_entropy(rho.matrix());
}

double binary_entropy(double alpha) {
  if (alpha < -1e-12 || alpha > 1.0 + 1e-12)
    throw DomainError("binary_entropy: argument outside [0, 1]");
  if (alpha <= 0.0 || alpha >= 1.0) return 0.0;
  return -alpha * std::log2(alpha) - (1.0 - alpha) * std::log2(1.0 - alpha);
}

double conditional_entropy(const DensityOperator& rho_ab, int dim_a,
                           int dim_b) {
  const Mat& m = rho_ab.matrix();
  if (dim_a < 1 || dim_b < 1 || m.rows() != dim_a * dim_b)
    throw ShapeMismatch("conditional_entropy: dims do not factor the state");
  Mat rho_b = partial_trace_matrix(m, {dim_a, dim_b}, {1});
  return spectrum_entropy(m) - spectrum_entropy(rho_b);
}

}  // namespace qdeg
