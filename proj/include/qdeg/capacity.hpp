// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Coherent information, the degraded conditional-entropy functional, and
// capacity upper bounds driven by an approximate-degradability parameter.
//
// Convention: epsilon_degradable reports the full diamond-norm distance
// (worst case 2). The continuity terms entering capacity_bounds are
// evaluated at half that value, which is the scale the reference bound
// curves use; the anti-degradability bound is evaluated at the reported
// value directly. BoundTerms.epsilon records the value actually used.

#ifndef QDEG_CAPACITY_HPP
#define QDEG_CAPACITY_HPP

#include <optional>

#include "qdeg/channel.hpp"
#include "qdeg/degradability.hpp"

namespace qdeg {

// I_c(rho, Phi) = H(Phi(rho)) - H(Phi^c(rho)). May be negative.
double coherent_information(const DensityOperator& rho,
                            const QuantumChannel& channel);

struct CoherentInfoResult {
  double value = 0.0;
  DensityOperator input;  // best input found
  bool converged = false; // every start met the ascent tolerance
};

// Best found value of max_rho I_c(rho, Phi) by multi-start projected
// gradient ascent (square-root parameterization, backtracking line search,
// objective tolerance 1e-8). The maximally mixed start is always included;
// `starts` additional random starts are seeded deterministically.
CoherentInfoResult channel_coherent_information(const QuantumChannel& channel,
                                                int starts = 20);

// Conditional entropy H(F|E') of the state obtained by feeding rho through
// the channel's dilation and the degrading map's dilation on the B leg:
//   omega = (W (x) 1_E) V rho V^dag (W (x) 1_E)^dag,  traced down to E' (x) F,
// where V: A -> B (x) E dilates the channel and W: B -> E' (x) F dilates the
// degrading map. Concave in rho.
double u_xi_objective(const QuantumChannel& channel,
                      const QuantumChannel& degrading,
                      const DensityOperator& rho);

// max_rho u_xi_objective: single-start ascent from the maximally mixed state
// (the objective is concave); gradient-norm stopping criterion 1e-7.
// Throws ShapeMismatch unless degrading maps B -> E of the channel.
double u_xi(const QuantumChannel& channel, const QuantumChannel& degrading);

// (eps/2) log2(dim-1) + h(eps/2); the dim = 1 case keeps only h(eps/2).
// Bounds |H(rho) - H(sigma)| for ||rho - sigma||_1 <= eps in dimension dim.
double fannes_audenaert_term(double epsilon, int dim);

// eps log2(dim) + (1 + eps/2) h(eps / (2 + eps)).
// Bounds |H(A|B)_rho - H(A|B)_sigma| for ||rho - sigma||_1 <= eps, dim = |A|.
double alicki_fannes_term(double epsilon, int dim);

// Continuity terms shared by the capacity bounds, all evaluated at the same
// epsilon (recorded in the struct).
struct BoundTerms {
  double epsilon = 0.0;  // value the terms below are evaluated at
  int dim_e = 0;         // environment of the channel
  int dim_f = 0;         // environment of the degrading map
  double fa = 0.0;       // fannes_audenaert_term(epsilon, dim_e)
  double af = 0.0;       // alicki_fannes_term(epsilon, dim_e)
  double af_f = 0.0;     // alicki_fannes_term(epsilon, dim_f)
  double xi = 0.0;       // fa + af
  double xi1 = 0.0;      // 2 af
  double xi2 = 0.0;      // fa + af
};

struct CapacityBounds {
  double q1 = 0.0;    // best-found single-letter coherent information
  double u_xi = 0.0;  // degraded conditional-entropy value
  // Quantum-capacity upper bounds.
  double q_upper_from_q1 = 0.0;  // q1 + xi
  double q_upper_from_u = 0.0;   // u_xi + af
  // Private-capacity upper bounds.
  double p_upper_from_q1 = 0.0;  // q1 + fa + 3 af
  double p_upper_from_u = 0.0;   // u_xi + eps(2 log|E| + log|F|/2) + ...
  // Single-letter private-information upper bound.
  double p1_upper_from_q1 = 0.0;  // q1 + xi
  // Symmetric-side-channel-assisted capacities obey the same two
  // environment-side bounds.
  double qss_upper = 0.0;  // = q_upper_from_u
  double pss_upper = 0.0;  // = p_upper_from_u
  // Filled by callers that also measure anti-degradability.
  std::optional<double> anti_upper;
  BoundTerms terms;
};

// Assembles every upper bound from a degradability report plus precomputed
// q1 and u_xi values. Throws DimensionMetadataMissing when the report lacks
// dim_e or dim_f.
CapacityBounds capacity_bounds(const QuantumChannel& channel,
                               const DegradabilityReport& report, double q1,
                               double uxi);

// Upper bound on both quantum and private capacity from anti-degradability:
//   (e/2) log2(|B|-1) + e log2|B| + h(e/2) + (1+e/2) h(e/(2+e))
// evaluated at e = report.epsilon.
double anti_degradable_bound(const DegradabilityReport& report, int dim_b);

struct CapacityInterval {
  double lo = 0.0;
  double hi = 0.0;
};
struct CloseDegradableBounds {
  CapacityInterval q;  // q1_of_nearby +- width
  CapacityInterval p;  // q1_of_nearby +- 2 width
};

// For a channel within diamond-norm epsilon of a degradable channel whose
// coherent information is q1_of_nearby:
//   width = eps log2|B| + (2 + eps) h(eps / (2 + eps)).
CloseDegradableBounds close_degradable_bounds(double epsilon, int dim_b,
                                              double q1_of_nearby);

// For a channel within diamond-norm epsilon of an anti-degradable channel:
// both capacities lie in [0, 2 width]; returns the upper endpoint.
double close_anti_degradable_upper(double epsilon, int dim_b);

// A channel within diamond-norm epsilon of a degradable channel is
// (epsilon + 2 sqrt(epsilon))-degradable. Callers clamp at 2.
double close_to_eps_degradable(double epsilon);

}  // namespace qdeg

#endif  // QDEG_CAPACITY_HPP
