// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Channel catalog: the parameterized families the sweeps and CLI evaluate,
// plus seeded random constructions.

#ifndef QDEG_ZOO_HPP
#define QDEG_ZOO_HPP

#include <cstdint>
#include <random>

#include "qdeg/channel.hpp"

namespace qdeg {

// (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z); p in [0,1].
// Kraus operators with exactly zero weight are dropped, so p = 0 stores a
// single identity Kraus operator.
QuantumChannel depolarizing(double p);

// Independent X and Z flips with probabilities p_x, p_z in [0, 1/2]:
// Pauli weights ((1-px)(1-pz), px(1-pz), (1-px)pz, px pz) on (I, X, Z, XZ).
QuantumChannel bb84(double p_x, double p_z);

// Kraus {diag(1, sqrt(1-gamma)), sqrt(gamma)|0><1|}; gamma in [0,1].
// Exactly degradable for gamma <= 1/2, anti-degradable for gamma >= 1/2.
QuantumChannel amplitude_damping(double gamma);

// Qubit into qutrit: rho survives in span{|0>,|1>} with probability 1-p and
// is replaced by the flag |2> with probability p. Degradable for p <= 1/2,
// anti-degradable for p >= 1/2.
QuantumChannel erasure(double p);

// rho -> tr(rho) * I/dim_out: every input is sent to the maximally mixed
// output state. Degrading through this map bounds the degradability
// parameter of any channel whose complement is nearly randomizing.
QuantumChannel constant_channel(int dim_in, int dim_out);

// Haar-distributed unitary: Ginibre matrix (hand-rolled Box-Muller over the
// given engine for bit-exact reproducibility) + QR with the R-diagonal phase
// normalization.
Mat haar_unitary(int dim, std::mt19937_64& rng);

// rho -> (1/count) sum_i U_i rho U_i^dag with U_i Haar on U(dim).
QuantumChannel random_mixed_unitary(int dim, int count, std::uint64_t seed);

// The channel A -> B whose complementary channel is the seeded mixed-unitary
// map above with dim = dim_a and count = dim_b. Built by slicing the stored
// mixed-unitary Kraus family, so taking complementary_of_stored of the
// result reproduces the mixed-unitary Choi exactly. dim_a >= 2, dim_b >= 1.
QuantumChannel random_unitary_complement(int dim_a, int dim_b,
                                         std::uint64_t seed);

// Family tag + parameters, the unit the sweeps and CLI operate on.
enum class ChannelFamily {
  kDepolarizing,
  kBb84,
  kAmplitudeDamping,
  kErasure,
  kRandomUnitaryComplement,
};

struct ChannelFamilySpec {
  ChannelFamily family = ChannelFamily::kDepolarizing;
  double p = 0.0;       // depolarizing, erasure
  double p_x = 0.0;     // bb84
  double p_z = 0.0;     // bb84
  double gamma = 0.0;   // amplitude damping
  int dim_a = 2;        // random family
  int dim_b = 2;        // random family
  std::uint64_t seed = 0;
};

QuantumChannel make_channel(const ChannelFamilySpec& spec);

}  // namespace qdeg

#endif  // QDEG_ZOO_HPP
