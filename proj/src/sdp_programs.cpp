// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#include "qdeg/degradability.hpp"

#include <algorithm>
#include <cmath>

namespace qdeg {

namespace {

// Shared block layout of the approximation programs:
//   0: Z   (dU * dA)   epigraph variable, Z >= Delta
//   1: S1  (dU * dA)   slack making Z - Delta PSD
//   2: S2  (dA)        slack making Tr_U Z <= t * identity
//   3: t   (1)         objective
//   4: JXi (dU * dT)   only in the degrading-map program
//
// The one-sided objective min t equals half the diamond norm; callers double.

void add_epigraph_rows(SdpProblem& prob, int d_u, int d_a) {
  // Tr_U Z + S2 - t * identity = 0
  MatrixEquality cap;
  cap.eq_dim = d_a;
  cap.rhs = Mat::Zero(d_a, d_a);
  LinearMapTerm tr_u;
  tr_u.block = 0;
  tr_u.weight = 1.0;
  for (int u = 0; u < d_u; ++u) {
    Mat v = Mat::Zero(d_u * d_a, d_a);
    v.block(u * d_a, 0, d_a, d_a) = Mat::Identity(d_a, d_a);
    tr_u.factors.push_back(std::move(v));
  }
  cap.terms.push_back(std::move(tr_u));
  cap.terms.push_back({2, 1.0, {Mat::Identity(d_a, d_a)}});
  LinearMapTerm t_term;
  t_term.block = 3;
  t_term.weight = -1.0;
  for (int a = 0; a < d_a; ++a) {
    Mat v = Mat::Zero(1, d_a);
    v(0, a) = 1.0;
    t_term.factors.push_back(std::move(v));
  }
  cap.terms.push_back(std::move(t_term));
  prob.matrix_equalities.push_back(std::move(cap));
}

SdpProblem base_problem(int d_u, int d_a) {
  SdpProblem prob;
  prob.block_dims = {d_u * d_a, d_u * d_a, d_a, 1};
  for (int d : prob.block_dims) prob.objective.push_back(Mat::Zero(d, d));
  prob.objective[3](0, 0) = 1.0;
  return prob;
}

double half_diamond_raw(const Mat& delta, int d_u, int d_a,
                        const SdpOptions& options, SdpStatus* status_out) {
  SdpProblem prob = base_problem(d_u, d_a);
  // Z - S1 = Delta
  MatrixEquality eq;
  eq.eq_dim = d_u * d_a;
  eq.rhs = delta;
  eq.terms.push_back({0, 1.0, {Mat::Identity(d_u * d_a, d_u * d_a)}});
  eq.terms.push_back({1, -1.0, {Mat::Identity(d_u * d_a, d_u * d_a)}});
  prob.matrix_equalities.push_back(std::move(eq));
  add_epigraph_rows(prob, d_u, d_a);
  SdpSolution sol = solve_sdp(prob, options);
  if (status_out) *status_out = sol.status;
  if (sol.status != SdpStatus::Optimal && sol.relative_gap > 1e-6)
    throw NumericalFailure("diamond-norm solve did not converge");
  return sol.primal_objective;
}

// Clean a numerically optimal Choi point to an exactly CPTP one: clip the
// spectrum, then rescale so the input marginal is exactly the identity.
ChoiMatrix clean_choi(const Mat& j_raw, int d_in, int d_out) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (j_raw + j_raw.adjoint()));
  RealVec lam = es.eigenvalues().cwiseMax(0.0);
  Mat j = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  Mat marginal = partial_trace_matrix(j, {d_out, d_in}, {1});
  Eigen::SelfAdjointEigenSolver<Mat> esm(0.5 * (marginal + marginal.adjoint()));
  RealVec mlam = esm.eigenvalues().cwiseMax(1e-14);
  Mat corr = esm.eigenvectors() * mlam.cwiseSqrt().cwiseInverse().asDiagonal() *
             esm.eigenvectors().adjoint();
  Mat lift = kron(Mat::Identity(d_out, d_out), corr);
  ChoiMatrix out;
  out.dim_in = d_in;
  out.dim_out = d_out;
  out.entries = lift * j * lift.adjoint();
  out.entries = 0.5 * (out.entries + out.entries.adjoint());
  return out;
}

int spectrum_rank(const Mat& m, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > cutoff) ++rank;
  return rank;
}

// min over CPTP Xi: T -> U of || target - Xi o theta ||_diamond / 2,
// where theta: A -> T and target: A -> U are given as Choi data.
DegradabilityReport best_approximation(const QuantumChannel& theta,
                                       const ChoiMatrix& target,
                                       const SdpOptions& options,
                                       const Mat* warm_choi) {
  const int d_a = theta.dim_in;
  const int d_t = theta.dim_out;
  const int d_u = target.dim_out;
  SdpProblem prob = base_problem(d_u, d_a);
  prob.block_dims.push_back(d_u * d_t);
  prob.objective.push_back(Mat::Zero(d_u * d_t, d_u * d_t));

  // Z - S1 + J(Xi o theta) = J(target); the composed Choi matrix is a
  // sandwich of J(Xi) by 1 (x) F_x^T over theta's Kraus operators.
  MatrixEquality eq;
  eq.eq_dim = d_u * d_a;
  eq.rhs = target.entries;
  eq.terms.push_back({0, 1.0, {Mat::Identity(d_u * d_a, d_u * d_a)}});
  eq.terms.push_back({1, -1.0, {Mat::Identity(d_u * d_a, d_u * d_a)}});
  LinearMapTerm compose_term;
  compose_term.block = 4;
  compose_term.weight = 1.0;
  for (const Mat& f : theta.kraus)
    compose_term.factors.push_back(
        kron(Mat::Identity(d_u, d_u), f.conjugate()));
  eq.terms.push_back(std::move(compose_term));
  prob.matrix_equalities.push_back(std::move(eq));

  add_epigraph_rows(prob, d_u, d_a);

  // Tr_U J(Xi) = identity on T
  MatrixEquality tp;
  tp.eq_dim = d_t;
  tp.rhs = Mat::Identity(d_t, d_t);
  LinearMapTerm tr_u;
  tr_u.block = 4;
  tr_u.weight = 1.0;
  for (int u = 0; u < d_u; ++u) {
    Mat v = Mat::Zero(d_u * d_t, d_t);
    v.block(u * d_t, 0, d_t, d_t) = Mat::Identity(d_t, d_t);
    tr_u.factors.push_back(std::move(v));
  }
  tp.terms.push_back(std::move(tr_u));
  prob.matrix_equalities.push_back(std::move(tp));

  SdpOptions opts = options;
  if (warm_choi && warm_choi->rows() == d_u * d_t) {
    const double s = 10.0;
    opts.initial_primal = {s * Mat::Identity(d_u * d_a, d_u * d_a),
                           s * Mat::Identity(d_u * d_a, d_u * d_a),
                           s * Mat::Identity(d_a, d_a), s * Mat::Identity(1, 1),
                           *warm_choi};
  }

  SdpSolution sol = solve_sdp(prob, opts);
  if (sol.status != SdpStatus::Optimal && sol.relative_gap > 1e-6)
    throw NumericalFailure("degradability solve did not converge");

  DegradabilityReport report;
  report.status = sol.status;
  report.iterations = sol.iterations;
  report.relative_gap = sol.relative_gap;
  report.dim_a = d_a;

  double eps = 2.0 * sol.primal_objective;
  eps = std::clamp(eps, 0.0, 2.0);
  if (eps < 1e-7) eps = 0.0;
  report.epsilon = eps;

  report.degrading_choi = clean_choi(sol.X[4], d_t, d_u);
  report.degrading = channel_from_choi(report.degrading_choi);
  report.dim_f = spectrum_rank(report.degrading_choi.entries, 1e-9);

  // certificate: recompute the distance achieved by the returned map
  QuantumChannel realized = compose(report.degrading, theta);
  report.verified_epsilon =
      diamond_norm_distance_choi(target, choi(realized), options);
  return report;
}

}  // namespace

double diamond_norm_distance_choi(const ChoiMatrix& ja, const ChoiMatrix& jb,
                                  const SdpOptions& options) {
  if (ja.dim_in != jb.dim_in || ja.dim_out != jb.dim_out)
    throw ShapeMismatch("diamond_norm_distance: channels must share dims");
  Mat delta = ja.entries - jb.entries;
  delta = 0.5 * (delta + delta.adjoint());
  double raw = half_diamond_raw(delta, ja.dim_out, ja.dim_in, options, nullptr);
  return std::max(0.0, 2.0 * raw);
}

double diamond_norm_distance(const QuantumChannel& a, const QuantumChannel& b,
                             const SdpOptions& options) {
  return diamond_norm_distance_choi(choi(a), choi(b), options);
}

DegradabilityReport epsilon_degradable(const QuantumChannel& channel,
                                       const SdpOptions& options,
                                       const Mat* warm_degrading_choi) {
  QuantumChannel canon = canonicalized(channel);
  QuantumChannel comp = complementary_of_stored(canon);
  DegradabilityReport report =
      best_approximation(canon, choi(comp), options, warm_degrading_choi);
  report.dim_b = canon.dim_out;
  report.dim_e = canon.dim_env();
  return report;
}

DegradabilityReport epsilon_antidegradable(const QuantumChannel& channel,
                                           const SdpOptions& options,
                                           const Mat* warm_degrading_choi) {
  QuantumChannel canon = canonicalized(channel);
  QuantumChannel comp = complementary_of_stored(canon);
  DegradabilityReport report =
      best_approximation(comp, choi(canon), options, warm_degrading_choi);
  report.dim_b = canon.dim_out;
  report.dim_e = canon.dim_env();
  return report;
}

}  // namespace qdeg
