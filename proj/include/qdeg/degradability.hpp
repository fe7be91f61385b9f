// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Diamond-norm distance and approximate-degradability programs.
//
// epsilon_degradable(Phi) computes
//   eps = min_Xi || Phi^c - Xi o Phi ||_diamond
// over channels Xi: B -> E, where Phi^c is the complementary channel on the
// minimal environment E. epsilon_antidegradable swaps the roles:
//   eps_bar = min_Xi || Phi - Xi o Phi^c ||_diamond.
// Both are solved as one semidefinite program whose objective equals half
// the diamond norm; reported values are rescaled to the full norm, so a
// perfectly (anti)degradable channel reports 0 and the worst case is 2.

#ifndef QDEG_DEGRADABILITY_HPP
#define QDEG_DEGRADABILITY_HPP

#include "qdeg/channel.hpp"
#include "qdeg/sdp.hpp"

namespace qdeg {

// Diamond-norm distance ||a - b||_diamond between channels with equal dims.
double diamond_norm_distance(const QuantumChannel& a, const QuantumChannel& b,
                             const SdpOptions& options = {});
// Same, from Choi matrices (must share dims).
double diamond_norm_distance_choi(const ChoiMatrix& ja, const ChoiMatrix& jb,
                                  const SdpOptions& options = {});

struct DegradabilityReport {
  double epsilon = 0.0;           // optimal diamond-norm distance
  double verified_epsilon = 0.0;  // recomputed from the returned map by an
                                  // independent diamond-norm solve
  ChoiMatrix degrading_choi;      // J(Xi), cleaned to an exact CPTP point
  QuantumChannel degrading;       // Xi factored from degrading_choi
  int dim_a = 0;                  // channel input
  int dim_b = 0;                  // channel output
  int dim_e = 0;                  // minimal environment of the channel
  int dim_f = 0;                  // environment of Xi (spectrum cutoff 1e-9)
  SdpStatus status = SdpStatus::NumericalTrouble;
  int iterations = 0;
  double relative_gap = 1.0;
};

// warm_degrading_choi, if given, seeds the solver with a previous J(Xi).
DegradabilityReport epsilon_degradable(const QuantumChannel& channel,
                                       const SdpOptions& options = {},
                                       const Mat* warm_degrading_choi = nullptr);
DegradabilityReport epsilon_antidegradable(
    const QuantumChannel& channel, const SdpOptions& options = {},
    const Mat* warm_degrading_choi = nullptr);

}  // namespace qdeg

#endif  // QDEG_DEGRADABILITY_HPP
