// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared channel builders for the test suites. Kept independent of the
// channel catalog so suites exercise the library layers separately.

#ifndef QDEG_TESTS_HELPERS_HPP
#define QDEG_TESTS_HELPERS_HPP

#include <random>

#include "qdeg/channel.hpp"

namespace qdeg::testing {

inline Mat pauli(char which) {
  Mat m(2, 2);
  switch (which) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Cplx(0, -1), Cplx(0, 1), 0; break;
    default:  m << 1, 0, 0, -1; break;
  }
  return m;
}

// Pauli mixture with weights (1-p, p/3, p/3, p/3).
inline QuantumChannel depol(double p) {
  std::vector<Mat> k{std::sqrt(1 - p) * pauli('I'), std::sqrt(p / 3) * pauli('X'),
                     std::sqrt(p / 3) * pauli('Y'), std::sqrt(p / 3) * pauli('Z')};
  return channel_from_kraus(k, 2, 2);
}

// Independent X and Z flips: weights ((1-px)(1-pz), px(1-pz), (1-px)pz,
// px pz) on (I, X, Z, XZ).
inline QuantumChannel bb84(double px, double pz) {
  std::vector<Mat> k{std::sqrt((1 - px) * (1 - pz)) * pauli('I'),
                     std::sqrt(px * (1 - pz)) * pauli('X'),
                     std::sqrt((1 - px) * pz) * pauli('Z'),
                     std::sqrt(px * pz) * pauli('X') * pauli('Z')};
  return channel_from_kraus(k, 2, 2);
}

inline QuantumChannel amp_damp(double g) {
  Mat k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1 - g);
  k1 << 0, std::sqrt(g), 0, 0;
  return channel_from_kraus({k0, k1}, 2, 2);
}

// Qubit into qutrit: the input survives in span{|0>, |1>} with probability
// 1 - p and is replaced by the flag |2> with probability p.
inline QuantumChannel erasure(double p) {
  Mat k0 = Mat::Zero(3, 2), k1 = Mat::Zero(3, 2), k2 = Mat::Zero(3, 2);
  k0(0, 0) = k0(1, 1) = std::sqrt(1 - p);
  k1(2, 0) = std::sqrt(p);
  k2(2, 1) = std::sqrt(p);
  return channel_from_kraus({k0, k1, k2}, 2, 3);
}

inline Mat random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Cplx(n(rng), n(rng));
  return m;
}

inline Mat random_density(std::mt19937_64& rng, int dim) {
  Mat g = random_matrix(rng, dim, dim);
  Mat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// Random channel: normalize arbitrary operators G_x to F_x = G_x M^{-1/2}.
inline QuantumChannel random_channel(std::mt19937_64& rng, int din, int dout,
                                     int nk) {
  std::vector<Mat> g;
  for (int x = 0; x < nk; ++x) g.push_back(random_matrix(rng, dout, din));
  Mat m = Mat::Zero(din, din);
  for (const Mat& gx : g) m += gx.adjoint() * gx;
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Mat inv_sqrt = es.eigenvectors() *
                 es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().adjoint();
  for (Mat& gx : g) gx = gx * inv_sqrt;
  return channel_from_kraus(g, din, dout);
}

}  // namespace qdeg::testing

#endif  // QDEG_TESTS_HELPERS_HPP
