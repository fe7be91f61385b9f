// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#include "qdeg/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "qdeg/entropy.hpp"

namespace qdeg {

namespace {

// Entropy of a PSD matrix and, optionally, log2 of it with eigenvalues
// floored at 1e-18 so gradients stay finite near the boundary.
double entropy_and_log2(const Mat& m, Mat* log2m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  const auto& lam = es.eigenvalues();
  double sum = 0.0;
  for (int i = 0; i < lam.size(); ++i)
    if (lam(i) > kEntropyEigCutoff) sum -= lam(i) * std::log2(lam(i));
  if (log2m) {
    RealVec logs(lam.size());
    for (int i = 0; i < lam.size(); ++i)
      logs(i) = std::log2(std::max(lam(i), 1e-18));
    *log2m = es.eigenvectors() * logs.asDiagonal() *
             es.eigenvectors().adjoint();
  }
  return sum;
}

Mat apply_kraus(const std::vector<Mat>& kraus, const Mat& rho) {
  Mat out = Mat::Zero(kraus.front().rows(), kraus.front().rows());
  for (const Mat& k : kraus) out += k * rho * k.adjoint();
  return 0.5 * (out + Mat(out.adjoint()));
}

Mat adjoint_apply(const std::vector<Mat>& kraus, const Mat& m) {
  Mat out = Mat::Zero(kraus.front().cols(), kraus.front().cols());
  for (const Mat& k : kraus) out += k.adjoint() * m * k;
  return 0.5 * (out + Mat(out.adjoint()));
}

struct AscentOutcome {
  double value = 0.0;
  Mat rho;
  bool converged = false;
};

// Projected gradient ascent over density matrices via rho = A A^dag with
// tr(A A^dag) = 1. `objective` returns the value and, through grad, the
// Euclidean gradient as a Hermitian matrix.
AscentOutcome ascend(int dim,
                     const std::function<double(const Mat&, Mat*)>& objective,
                     const Mat& rho0, double obj_tol, double grad_tol,
                     int max_iter) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho0);
  Mat a = es.eigenvectors() *
          es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
          es.eigenvectors().adjoint();
  a /= a.norm();
  Mat rho = a * a.adjoint();
  rho = 0.5 * (rho + Mat(rho.adjoint()));
  Mat grad;
  double val = objective(rho, &grad);
  double step = 0.25;
  int flat_steps = 0;
  AscentOutcome out;
  for (int it = 0; it < max_iter; ++it) {
    // Chain rule through rho = A A^dag / tr(A A^dag) at tr = 1.
    const double mean = (grad * rho).trace().real();
    Mat ga = 2.0 * (grad - mean * Mat::Identity(dim, dim)) * a;
    const double gnorm = ga.norm();
    if (gnorm <= grad_tol) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Mat at = a + step * ga;
      at /= at.norm();
      Mat rt = at * at.adjoint();
      rt = 0.5 * (rt + Mat(rt.adjoint()));
      Mat gt;
      const double vt = objective(rt, &gt);
      if (vt > val + 1e-4 * step * gnorm * gnorm) {
        flat_steps = (vt - val <= obj_tol) ? flat_steps + 1 : 0;
        a = at;
        rho = rt;
        grad = gt;
        val = vt;
        accepted = true;
        step = std::min(step * 1.6, 4.0);
        break;
      }
      step *= 0.5;
    }
    // No ascent at machine-small steps means a stationary point.
    if (!accepted || flat_steps >= 3) {
      out.converged = true;
      break;
    }
  }
  out.value = val;
  out.rho = rho;
  return out;
}

// Kraus family of rho -> Tr_E (W (x) 1_E) V rho V^dag (W (x) 1_E)^dag,
// mapping A into E' (x) F; one Kraus operator per traced E index.
struct DegradedEvaluator {
  int dim_a = 0;
  int dim_e2 = 0;  // degrading output E'
  int dim_f = 0;   // degrading environment F
  std::vector<Mat> theta;

  DegradedEvaluator(const QuantumChannel& channel,
                    const QuantumChannel& degrading) {
    if (degrading.dim_in != channel.dim_out)
      throw ShapeMismatch(
          "u_xi: degrading map input must equal channel output dimension");
    StinespringIsometry v = stinespring(channel);
    StinespringIsometry w = stinespring(degrading);
    dim_a = channel.dim_in;
    dim_e2 = degrading.dim_out;
    dim_f = w.dim_env;
    const int dim_e = v.dim_env;
    Mat t = kron(w.matrix, Mat::Identity(dim_e, dim_e)) * v.matrix;
    theta.reserve(dim_e);
    for (int e = 0; e < dim_e; ++e) {
      Mat k(dim_e2 * dim_f, dim_a);
      for (int r = 0; r < dim_e2 * dim_f; ++r) k.row(r) = t.row(r * dim_e + e);
      theta.push_back(std::move(k));
    }
  }

  double eval(const Mat& rho, Mat* grad) const {
    Mat om = apply_kraus(theta, rho);
    Mat om_e2 = partial_trace_matrix(om, {dim_e2, dim_f}, {0});
    Mat log_om, log_e2;
    const double h_joint = entropy_and_log2(om, grad ? &log_om : nullptr);
    const double h_e2 = entropy_and_log2(om_e2, grad ? &log_e2 : nullptr);
    if (grad) {
      Mat lifted = kron(log_e2, Mat::Identity(dim_f, dim_f));
      *grad = adjoint_apply(theta, Mat(lifted - log_om));
    }
    return h_joint - h_e2;
  }
};

}  // namespace

double coherent_information(const DensityOperator& rho,
                            const QuantumChannel& channel) {
  if (rho.dim() != channel.dim_in)
    throw ShapeMismatch("coherent_information: input dimension mismatch");
  QuantumChannel comp = complementary_of_stored(channel);
  return spectrum_entropy(apply_matrix(channel, rho.matrix())) -
         spectrum_entropy(apply_matrix(comp, rho.matrix()));
}

CoherentInfoResult channel_coherent_information(const QuantumChannel& channel,
                                                int starts) {
  const int d = channel.dim_in;
  QuantumChannel comp = complementary_of_stored(channel);
  auto objective = [&](const Mat& rho, Mat* grad) {
    Mat out = apply_kraus(channel.kraus, rho);
    Mat env = apply_kraus(comp.kraus, rho);
    Mat log_out, log_env;
    const double h_out = entropy_and_log2(out, grad ? &log_out : nullptr);
    const double h_env = entropy_and_log2(env, grad ? &log_env : nullptr);
    if (grad)
      *grad = adjoint_apply(comp.kraus, log_env) -
              adjoint_apply(channel.kraus, log_out);
    return h_out - h_env;
  };

  // The maximally mixed start is always included; extra starts are seeded
  // deterministically so results are reproducible.
  std::vector<Mat> inits;
  inits.push_back(Mat::Identity(d, d) / static_cast<double>(d));
  std::mt19937_64 rng(0x51a57ULL);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int s = 0; s < std::max(starts, 0); ++s) {
    Mat g(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) g(r, c) = Cplx(n(rng), n(rng));
    Mat rho = g * g.adjoint();
    inits.push_back(rho / rho.trace().real());
  }

  CoherentInfoResult best;
  bool first = true;
  bool all_converged = true;
  for (const Mat& rho0 : inits) {
    AscentOutcome run = ascend(d, objective, rho0, 1e-8, 1e-10, 2000);
    all_converged = all_converged && run.converged;
    if (first || run.value > best.value) {
      best.value = run.value;
      best.input = DensityOperator::create(run.rho);
      first = false;
    }
  }
  best.converged = all_converged;
  return best;
}

double u_xi_objective(const QuantumChannel& channel,
                      const QuantumChannel& degrading,
                      const DensityOperator& rho) {
  DegradedEvaluator ev(channel, degrading);
  if (rho.dim() != ev.dim_a)
    throw ShapeMismatch("u_xi_objective: input dimension mismatch");
  return ev.eval(rho.matrix(), nullptr);
}

double u_xi(const QuantumChannel& channel, const QuantumChannel& degrading) {
  DegradedEvaluator ev(channel, degrading);
  auto objective = [&](const Mat& rho, Mat* grad) { return ev.eval(rho, grad); };
  const int d = ev.dim_a;
  Mat mixed = Mat::Identity(d, d) / static_cast<double>(d);
  // Single start suffices: the objective is concave (see the midpoint
  // property test).
  AscentOutcome run = ascend(d, objective, mixed, 1e-12, 1e-7, 4000);
  return run.value;
}

double fannes_audenaert_term(double epsilon, int dim) {
  if (epsilon < -1e-12 || epsilon > 2.0 + 1e-12 || dim < 1)
    throw DomainError("fannes_audenaert_term: need epsilon in [0,2], dim >= 1");
  epsilon = std::clamp(epsilon, 0.0, 2.0);
  const double half = epsilon / 2.0;
  double out = binary_entropy(half);
  if (dim > 1) out += half * std::log2(static_cast<double>(dim - 1));
  return out;
}

double alicki_fannes_term(double epsilon, int dim) {
  if (epsilon < -1e-12 || epsilon > 2.0 + 1e-12 || dim < 1)
    throw DomainError("alicki_fannes_term: need epsilon in [0,2], dim >= 1");
  epsilon = std::clamp(epsilon, 0.0, 2.0);
  return epsilon * std::log2(static_cast<double>(dim)) +
         (1.0 + epsilon / 2.0) * binary_entropy(epsilon / (2.0 + epsilon));
}

CapacityBounds capacity_bounds(const QuantumChannel& channel,
                               const DegradabilityReport& report, double q1,
                               double uxi) {
  if (channel.dim_in != report.dim_a || channel.dim_out != report.dim_b)
    throw ShapeMismatch("capacity_bounds: report does not match channel dims");
  if (report.dim_e < 1 || report.dim_f < 1)
    throw DimensionMetadataMissing(
        "capacity_bounds: report lacks environment dimensions");
  // Reported epsilon is the full diamond norm; the continuity terms use
  // half of it (the scale of the reference curves).
  const double sigma = std::clamp(report.epsilon / 2.0, 0.0, 2.0);

  BoundTerms t;
  t.epsilon = sigma;
  t.dim_e = report.dim_e;
  t.dim_f = report.dim_f;
  t.fa = fannes_audenaert_term(sigma, t.dim_e);
  t.af = alicki_fannes_term(sigma, t.dim_e);
  t.af_f = alicki_fannes_term(sigma, t.dim_f);
  t.xi = t.fa + t.af;
  t.xi1 = 2.0 * t.af;
  t.xi2 = t.xi;

  CapacityBounds b;
  b.q1 = q1;
  b.u_xi = uxi;
  b.terms = t;
  b.q_upper_from_q1 = q1 + t.xi;
  b.q_upper_from_u = uxi + t.af;
  b.p_upper_from_q1 = q1 + t.fa + 3.0 * t.af;
  b.p_upper_from_u =
      uxi +
      sigma * (2.0 * std::log2(static_cast<double>(t.dim_e)) +
               0.5 * std::log2(static_cast<double>(t.dim_f))) +
      2.5 * (1.0 + sigma / 2.0) * binary_entropy(sigma / (2.0 + sigma));
  b.p1_upper_from_q1 = q1 + t.xi;
  b.qss_upper = b.q_upper_from_u;
  b.pss_upper = b.p_upper_from_u;
  return b;
}

double anti_degradable_bound(const DegradabilityReport& report, int dim_b) {
  if (dim_b < 1) throw DomainError("anti_degradable_bound: dim_b >= 1");
  const double e = std::clamp(report.epsilon, 0.0, 2.0);
  double out = e * std::log2(static_cast<double>(dim_b)) +
               binary_entropy(e / 2.0) +
               (1.0 + e / 2.0) * binary_entropy(e / (2.0 + e));
  if (dim_b > 1)
    out += (e / 2.0) * std::log2(static_cast<double>(dim_b - 1));
  return out;
}

namespace {
double close_width(double epsilon, int dim_b) {
  if (epsilon < -1e-12 || epsilon > 2.0 + 1e-12 || dim_b < 1)
    throw DomainError("close-degradable bound: need epsilon in [0,2], dim_b >= 1");
  epsilon = std::clamp(epsilon, 0.0, 2.0);
  return epsilon * std::log2(static_cast<double>(dim_b)) +
         (2.0 + epsilon) * binary_entropy(epsilon / (2.0 + epsilon));
}
}  // namespace

CloseDegradableBounds close_degradable_bounds(double epsilon, int dim_b,
                                              double q1_of_nearby) {
  const double w = close_width(epsilon, dim_b);
  CloseDegradableBounds out;
  out.q = {q1_of_nearby - w, q1_of_nearby + w};
  out.p = {q1_of_nearby - 2.0 * w, q1_of_nearby + 2.0 * w};
  return out;
}

double close_anti_degradable_upper(double epsilon, int dim_b) {
  return 2.0 * close_width(epsilon, dim_b);
}

double close_to_eps_degradable(double epsilon) {
  if (epsilon < -1e-12 || epsilon > 2.0 + 1e-12)
    throw DomainError("close_to_eps_degradable: need epsilon in [0,2]");
  epsilon = std::clamp(epsilon, 0.0, 2.0);
  return epsilon + 2.0 * std::sqrt(epsilon);
}

}  // namespace qdeg
