// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Entropic functionals in bits: von Neumann entropy, binary entropy, and
// conditional entropy of a bipartite state.

#ifndef QDEG_ENTROPY_HPP
#define QDEG_ENTROPY_HPP

#include "qdeg/channel.hpp"

namespace qdeg {

// Eigenvalues below this are treated as exact zeros (0 log 0 = 0).
inline constexpr double kEntropyEigCutoff = 1e-15;

// H(rho) = -Tr rho log2 rho. Result lies in [0, log2 dim].
double von_neumann_entropy(const DensityOperator& rho);

// Entropy of the spectrum of a Hermitian PSD matrix; trusts the caller on
// positivity and clamps small negative eigenvalues to zero. Internal engine
// behind von_neumann_entropy, exposed for intermediate states that are
// positive only up to solver noise.
double spectrum_entropy(const Mat& m);

// h(alpha) = -alpha log2 alpha - (1-alpha) log2(1-alpha).
// Endpoints return exactly 0; outside [0,1] (1e-12 grace) throws DomainError.
double binary_entropy(double alpha);

// H(A|B) = H(AB) - H(B) for rho_ab on A (x) B with the given factor dims.
// May be negative. Throws ShapeMismatch when dims do not factor rho_ab.
double conditional_entropy(const DensityOperator& rho_ab, int dim_a,
                           int dim_b);

}  // namespace qdeg

#endif  // QDEG_ENTROPY_HPP
