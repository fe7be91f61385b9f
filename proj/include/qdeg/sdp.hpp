// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Interior-point solver for block-structured semidefinite programs over
// complex Hermitian variables:
//
//   minimize    sum_k <C_k, X_k>
//   subject to  <A_i, X> = b_i            (scalar constraints)
//               sum_k L_k(X_k) = B        (matrix equalities)
//               X_k >= 0,
//
// where <P, Q> = Tr(P Q) and each L_k is given in the form
// L_k(X) = weight * sum_s V_s^dag X V_s. A matrix equality over a d x d
// Hermitian space contributes d^2 real constraint rows, enumerated for
// r <= c in lexicographic order: one row per diagonal entry and a
// real / imaginary pair per off-diagonal entry.
//
// The solver is a primal-dual path-following method with Nesterov-Todd
// scaling and a predictor-corrector step, run directly in complex
// arithmetic. Real scalars enter as 1 x 1 blocks. Redundant constraint rows
// are detected once by a rank-revealing factorization and eliminated.
//
// Setting the environment variable QDEG_DUMP_SDP to a file path makes
// solve_sdp append a plain-text triplet dump of the problem data.

#ifndef QDEG_SDP_HPP
#define QDEG_SDP_HPP

#include <vector>

#include "qdeg/channel.hpp"

namespace qdeg {

// One upper-triangular coefficient of a scalar constraint: the matrix A has
// `value` at (row, col) and conj(value) at (col, row). Diagonal entries must
// be real.
struct ScalarEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  Cplx value{0.0, 0.0};
};

struct ScalarConstraint {
  std::vector<ScalarEntry> entries;
  double rhs = 0.0;
};

// Contribution of one block to a matrix equality:
//   weight * sum_s factors[s]^dag X_block factors[s],
// each factor of shape block_dim x eq_dim.
struct LinearMapTerm {
  int block = 0;
  double weight = 1.0;
  std::vector<Mat> factors;
};

struct MatrixEquality {
  int eq_dim = 0;
  Mat rhs;  // eq_dim x eq_dim Hermitian
  std::vector<LinearMapTerm> terms;
};

struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<Mat> objective;  // one Hermitian C_k per block
  std::vector<ScalarConstraint> scalar_constraints;
  std::vector<MatrixEquality> matrix_equalities;
};

// Optimal is also reported when a stalled or iteration-capped solve has an
// iterate within 10x every tolerance (1e-7 at the defaults); the solution
// always carries the achieved gap and residuals, so callers can audit the
// accuracy actually reached.
enum class SdpStatus { Optimal, MaxIterations, PrimalInfeasible, NumericalTrouble };

// Stable lowercase tag used in CSV status cells and JSON reports:
// "ok", "max_iterations", "infeasible", "numerical_trouble".
const char* sdp_status_name(SdpStatus status);

struct SdpOptions {
  double gap_tol = 1e-8;   // relative duality gap
  double feas_tol = 1e-8;  // relative primal / dual residuals
  int max_iterations = 200;
  int threads = 0;  // 0: pick from hardware
  bool verbose = false;
  // Optional warm start for the primal blocks; eigenvalues are clamped to a
  // margin so the start stays strictly interior.
  std::vector<Mat> initial_primal;
  double warm_start_margin = 0.1;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalTrouble;
  std::vector<Mat> X;  // primal blocks
  std::vector<Mat> S;  // dual slack blocks
  RealVec y;           // multipliers; scalar rows first, then equality rows
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 1.0;
  double primal_residual = 1.0;
  double dual_residual = 1.0;
  int iterations = 0;
};

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

// Introspection helpers used by tests and the problem dump.
int constraint_row_count(const SdpProblem& problem);
RealVec constraint_rhs(const SdpProblem& problem);
// Dense coefficient matrix of one constraint row on one block.
Mat constraint_matrix(const SdpProblem& problem, int row, int block);
// weight * sum_s V_s^dag X V_s for one term.
Mat lift_forward(const LinearMapTerm& term, const Mat& x);

}  // namespace qdeg

#endif  // QDEG_SDP_HPP
