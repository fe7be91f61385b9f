// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Parameter sweeps over channel families: per-point degradability solves,
// closed-form capacity bound members, lower convex envelopes, and CSV
// emission. The envelope (hull) of a set of upper bounds is itself an upper
// bound because capacities are convex-combinable across channel mixtures.

#ifndef QDEG_SWEEP_HPP
#define QDEG_SWEEP_HPP

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qdeg/sdp.hpp"
#include "qdeg/zoo.hpp"

namespace qdeg {

// Lower convex envelope of a point set, evaluated back on the input grid.
struct EnvelopePoints {
  std::vector<double> x;  // the input abscissae, unchanged
  std::vector<double> y;  // envelope values at those abscissae
};

// Monotone-chain lower hull. pre: >= 2 points with strictly increasing x
// (DomainError otherwise, including duplicates).
EnvelopePoints lower_convex_envelope(
    const std::vector<std::pair<double, double>>& points);

// Piecewise-linear evaluation between the envelope's grid points.
// DomainError outside [x.front(), x.back()] beyond a 1e-12 grace.
double envelope_value(const EnvelopePoints& env, double x);

// Closed-form curves for the depolarizing family, valid on p in [0, 1]
// unless noted. All are exact upper bounds on the quantum capacity except
// depolarizing_q1, which is the hashing lower-bound expression.
double depolarizing_q1(double p);              // 1+(1-p)log2(1-p)+p log2(p/3)
double depolarizing_entropic_bound(double p);  // 1 - h(p)
double depolarizing_damping_bound(double p);   // via gamma(p)=4(sqrt(1-p)-1+p)
double depolarizing_cloning_bound(double p);   // 1 - 4p, valid p <= 1/4

// Closed-form curves for independent-flip channels.
double bb84_q1(double p_x, double p_z);  // 1 - h(p_x) - h(p_z)
double bb84_flip_bound(double p);        // h(1/2-2p(1-p)) - h(2p(1-p))

// Envelope of the three closed-form depolarizing bounds on the grid.
// No solver involved; suitable as a sub-millisecond reference curve.
std::vector<double> prior_depolarizing_hull(const std::vector<double>& grid);

// One swept parameter point. Members that do not apply to the family stay
// NaN and are omitted from the CSV.
struct SweepRow {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
  double param = 0.0;      // p (depolarizing) or p_x (bb84)
  double p_z = kUnset;     // bb84 only: ratio * param
  double q1 = kUnset;      // closed-form hashing / flip lower-bound value
  double epsilon = kUnset; // measured degradability parameter
  double eps_bound = kUnset;  // q1 + continuity terms at the measured epsilon
  double u_bound = kUnset;    // optional: degraded-entropy variant
  double entropic_bound = kUnset;
  double damping_bound = kUnset;
  double cloning_bound = kUnset;
  double flip_bound = kUnset;
  double prior_hull = kUnset;  // envelope of the closed-form members only
  double hull = kUnset;        // envelope including eps_bound
  std::string status = "ok";
  double seconds = 0.0;
};

struct SweepTable {
  ChannelFamily family = ChannelFamily::kDepolarizing;
  double ratio = 1.0;  // bb84: p_z = ratio * p_x
  bool with_u = false;
  std::vector<SweepRow> rows;
  double total_seconds = 0.0;
  SdpOptions solver;
};

struct SweepOptions {
  int workers = 1;     // parallel row solves; values are worker-independent
  bool with_u = false; // adds the ascent-based bound column (slower)
  SdpOptions solver;
};

// Per-point degradability solve plus all closed-form members and both
// envelopes. pre: grid strictly increasing within [0, 0.25]. Solver errors
// are recorded in the row status; the envelope skips those rows' eps_bound.
SweepTable sweep_depolarizing(const std::vector<double>& p_grid,
                              const SweepOptions& options = {});

// Same for independent flips with p_z = ratio * p_x. The flip_bound member
// applies only when ratio == 1. pre: grid strictly increasing, ratio > 0,
// and p_x, ratio*p_x within [0, 1/2].
SweepTable sweep_bb84(const std::vector<double>& p_grid, double ratio,
                      const SweepOptions& options = {});

// Header plus one row per grid point; 9 significant digits; NaN cells are
// empty; byte-deterministic for a fixed table. A companion file at
// path + ".meta.json" records grid, options, and wall-clock times.
void emit_csv(const SweepTable& table, const std::string& path);

}  // namespace qdeg

#endif  // QDEG_SWEEP_HPP
