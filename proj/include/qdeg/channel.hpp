// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Channel representations and conversions: Kraus, Choi, transfer matrix,
// Stinespring dilation, complementary channel, composition, tensor products,
// and partial traces. All matrices are dense complex doubles.
//
// Conventions (fixed across the whole library):
//   * vec is row-major: vec(F)[b*dimIn + a] = F(b, a).
//   * The Choi matrix lives on output (x) input:
//       J(Phi) = sum_x vec(F_x) vec(F_x)^dag,  Tr J = dim_in.
//   * The transfer matrix satisfies T(Xi o Phi) = T(Xi) T(Phi) and relates to
//     the Choi matrix by the index involution <ij|T|kl> = <ik|J|jl>.

#ifndef QDEG_CHANNEL_HPP
#define QDEG_CHANNEL_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qdeg/errors.hpp"

namespace qdeg {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

// Tolerance ladder: construction invariants 1e-10, identity checks 1e-12,
// eigenvalue cutoffs 1e-12 (see individual uses).
inline constexpr double kHermTol = 1e-12;
inline constexpr double kConstructTol = 1e-10;
inline constexpr double kKrausCompletenessTol = 1e-8;
inline constexpr double kChoiRankCutoff = 1e-12;

// A Hermitian matrix validated at construction (1e-12 entrywise).
struct HermitianOperator {
  int dim = 0;
  Mat entries;

  static HermitianOperator create(const Mat& m);
};

// A density operator: Hermitian, eigenvalues >= -1e-10, trace within 1e-10
// of one.
struct DensityOperator {
  HermitianOperator base;

  static DensityOperator create(const Mat& m);
  int dim() const { return base.dim; }
  const Mat& matrix() const { return base.entries; }
};

// A completely positive trace-preserving map held as a validated Kraus
// family. The Kraus list length is the environment dimension used by the
// Stinespring dilation and the complementary channel.
struct QuantumChannel {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<Mat> kraus;
  // ||sum F^dag F - 1||_op measured at construction.
  double completeness_residual = 0.0;

  int dim_env() const { return static_cast<int>(kraus.size()); }
};

// J(Phi) on output (x) input with Tr J = dim_in.
struct ChoiMatrix {
  int dim_in = 0;
  int dim_out = 0;
  Mat entries;
};

// V = sum_x F_x (x) |x>_E with V^dag V = 1, so Phi(rho) = Tr_E V rho V^dag.
// Rows are indexed (b, e) with b major, matching kron(F, e_x).
struct StinespringIsometry {
  int dim_in = 0;
  int dim_out = 0;
  int dim_env = 0;
  Mat matrix;
};

// T = sum_x F_x (x) conj(F_x); acts on vec'd operators.
struct TransferMatrix {
  int dim_in = 0;
  int dim_out = 0;
  Mat entries;
};

// --- constructors and conversions ---

QuantumChannel channel_from_kraus(const std::vector<Mat>& kraus, int dim_in,
                                  int dim_out);
QuantumChannel identity_channel(int dim);

ChoiMatrix choi(const QuantumChannel& channel);
// Eigendecomposes J; eigenvalues below 1e-12 are discarded, so the result has
// the minimal Kraus rank.
QuantumChannel channel_from_choi(const ChoiMatrix& J);
// channel_from_choi(choi(channel)): minimal Kraus rank, canonical basis.
QuantumChannel canonicalized(const QuantumChannel& channel);

DensityOperator apply(const QuantumChannel& channel, const DensityOperator& rho);
Mat apply_matrix(const QuantumChannel& channel, const Mat& rho);

StinespringIsometry stinespring(const QuantumChannel& channel);

// Complementary channel via the canonical minimal dilation: the input is
// canonicalized first, then Phi^c(rho) = Tr_B V rho V^dag.
QuantumChannel complementary(const QuantumChannel& channel);
// Same slicing without canonicalizing first (keeps the stored Kraus family
// and its environment labeling).
QuantumChannel complementary_of_stored(const QuantumChannel& channel);

TransferMatrix transfer_matrix(const QuantumChannel& channel);

QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner);
QuantumChannel tensor_product(const QuantumChannel& a, const QuantumChannel& b);

// Traces out every factor not listed in `keep`; kept factors stay in their
// original relative order. dims are listed major-to-minor.
HermitianOperator partial_trace(const HermitianOperator& op,
                                const std::vector<int>& dims,
                                const std::vector<int>& keep);
Mat partial_trace_matrix(const Mat& op, const std::vector<int>& dims,
                         const std::vector<int>& keep);

// --- small helpers shared across modules ---

Mat kron(const Mat& a, const Mat& b);
Vec vec_row_major(const Mat& m);
Mat unvec_row_major(const Vec& v, int rows, int cols);
bool is_hermitian(const Mat& m, double tol);
// Largest |eigenvalue| of a Hermitian matrix.
double herm_operator_norm(const Mat& m);
// Sum of |eigenvalues| of a Hermitian matrix.
double herm_trace_norm(const Mat& m);

}  // namespace qdeg

#endif  // QDEG_CHANNEL_HPP
