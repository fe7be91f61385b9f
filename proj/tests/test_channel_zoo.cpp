// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qdeg/channel_json.hpp"
#include "qdeg/degradability.hpp"
#include "qdeg/zoo.hpp"

using namespace qdeg;

namespace {

Mat apply_to(const QuantumChannel& ch, const Mat& rho) {
  return apply_matrix(ch, rho);
}

QuantumChannel pauli_mixture(double p_i, double p_x, double p_z) {
  Mat x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  std::vector<Mat> k;
  if (p_i > 0) k.push_back(std::sqrt(p_i) * Mat::Identity(2, 2));
  if (p_x > 0) k.push_back(std::sqrt(p_x) * x);
  if (p_z > 0) k.push_back(std::sqrt(p_z) * z);
  return channel_from_kraus(k, 2, 2);
}

}  // namespace

TEST_CASE("zoo: parameter domains are validated") {
  CHECK_THROWS_AS(depolarizing(-0.01), DomainError);
  CHECK_THROWS_AS(depolarizing(1.01), DomainError);
  CHECK_THROWS_AS(bb84(0.51, 0.1), DomainError);
  CHECK_THROWS_AS(bb84(0.1, -0.01), DomainError);
  CHECK_THROWS_AS(amplitude_damping(1.5), DomainError);
  CHECK_THROWS_AS(erasure(-0.5), DomainError);
  CHECK_THROWS_AS(random_unitary_complement(1, 4, 0), DomainError);
  CHECK_THROWS_AS(random_unitary_complement(2, 0, 0), DomainError);
  CHECK_THROWS_AS(random_mixed_unitary(2, 0, 0), DomainError);
}

TEST_CASE("depolarizing: action, spectrum, composition") {
  CHECK((choi(depolarizing(0.0)).entries - choi(identity_channel(2)).entries)
            .norm() <= 1e-14);
  CHECK(depolarizing(0.0).kraus.size() == 1);

  Mat e00 = Mat::Zero(2, 2);
  e00(0, 0) = 1.0;
  Mat out = apply_to(depolarizing(0.1), e00);
  CHECK(std::abs(out(0, 0).real() - (1.0 - 0.2 / 3.0)) <= 1e-12);
  CHECK(std::abs(out(1, 1).real() - 0.2 / 3.0) <= 1e-12);
  CHECK(std::abs(out(0, 1)) <= 1e-15);

  Eigen::SelfAdjointEigenSolver<Mat> es(choi(depolarizing(0.3)).entries);
  CHECK(std::abs(es.eigenvalues()(3) - 2.0 * 0.7) <= 1e-12);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(es.eigenvalues()(i) - 2.0 * 0.3 / 3.0) <= 1e-12);

  const double p = 0.05, q = 0.08;
  const double r = p + q - 4.0 * p * q / 3.0;
  CHECK((choi(compose(depolarizing(p), depolarizing(q))).entries -
         choi(depolarizing(r)).entries)
            .norm() <= 1e-12);

  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    Mat rho = testing::random_density(rng, 2);
    CHECK((apply_to(depolarizing(0.75), rho) - 0.5 * Mat::Identity(2, 2))
              .norm() <= 1e-12);
  }
}

TEST_CASE("zoo: unital channels fix the maximally mixed state") {
  Mat mixed = 0.5 * Mat::Identity(2, 2);
  CHECK((apply_to(depolarizing(0.3), mixed) - mixed).norm() <= 1e-12);
  CHECK((apply_to(bb84(0.1, 0.2), mixed) - mixed).norm() <= 1e-12);
}

TEST_CASE("bb84 factorizes into independent flips") {
  for (auto [px, pz] : {std::pair{0.1, 0.1}, std::pair{0.1, 0.3}}) {
    QuantumChannel bit = pauli_mixture(1.0 - px, px, 0.0);
    QuantumChannel phase = pauli_mixture(1.0 - pz, 0.0, pz);
    CHECK((choi(bb84(px, pz)).entries - choi(compose(bit, phase)).entries)
              .norm() <= 1e-12);
  }
  CHECK(bb84(0.0, 0.0).kraus.size() == 1);
  CHECK(bb84(0.25, 0.0).kraus.size() == 2);
}

TEST_CASE("amplitude damping: endpoints and degradability calibration") {
  CHECK((choi(amplitude_damping(0.0)).entries -
         choi(identity_channel(2)).entries)
            .norm() <= 1e-14);

  std::mt19937_64 rng(22);
  Mat ground = Mat::Zero(2, 2);
  ground(0, 0) = 1.0;
  for (int t = 0; t < 5; ++t) {
    Mat rho = testing::random_density(rng, 2);
    CHECK((apply_to(amplitude_damping(1.0), rho) - ground).norm() <= 1e-12);
  }

  CHECK(epsilon_degradable(amplitude_damping(0.3)).epsilon <= 1e-6);
  CHECK(epsilon_antidegradable(amplitude_damping(0.7)).epsilon <= 1e-6);
}

TEST_CASE("erasure: structure and degradability calibration") {
  QuantumChannel iso = erasure(0.0);
  CHECK(iso.kraus.size() == 1);
  CHECK((iso.kraus[0].adjoint() * iso.kraus[0] - Mat::Identity(2, 2)).norm() <=
        1e-14);

  std::mt19937_64 rng(23);
  Mat rho = testing::random_density(rng, 2);
  Mat out = apply_to(erasure(0.3), rho);
  CHECK((out.topLeftCorner(2, 2) - 0.7 * rho).norm() <= 1e-12);
  CHECK(std::abs(out(2, 2).real() - 0.3) <= 1e-12);
  CHECK(std::abs(out(2, 0)) + std::abs(out(2, 1)) <= 1e-15);

  CHECK(epsilon_degradable(erasure(0.3)).epsilon <= 1e-6);
  CHECK(epsilon_antidegradable(erasure(0.7)).epsilon <= 1e-6);
}

TEST_CASE("haar unitaries: unitarity, determinism, first moment") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 10; ++t) {
    for (int d : {2, 3}) {
      Mat u = haar_unitary(d, rng);
      CHECK((u.adjoint() * u - Mat::Identity(d, d)).norm() <= 1e-12);
    }
  }

  std::mt19937_64 a(77), b(77);
  Mat ua = haar_unitary(3, a), ub = haar_unitary(3, b);
  CHECK((ua - ub).norm() == 0.0);

  // First moment: E[U (x) conj(U)] has entries delta_ik delta_jl / d.
  const int n = 1000, d = 2;
  std::mt19937_64 rng2(25);
  Mat mean = Mat::Zero(d * d, d * d);
  for (int s = 0; s < n; ++s) {
    Mat u = haar_unitary(d, rng2);
    mean += kron(u, u.conjugate());
  }
  mean /= static_cast<double>(n);
  Mat target = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      target(i * d + i, j * d + j) = 1.0 / static_cast<double>(d);
  CHECK((mean - target).norm() <= 0.1);
}

TEST_CASE("random mixed unitary and its complement") {
  QuantumChannel m = random_mixed_unitary(2, 4, 7);
  CHECK(m.kraus.size() == 4);
  Mat mixed = 0.5 * Mat::Identity(2, 2);
  CHECK((apply_to(m, mixed) - mixed).norm() <= 1e-12);

  QuantumChannel phi = random_unitary_complement(2, 4, 7);
  CHECK(phi.dim_in == 2);
  CHECK(phi.dim_out == 4);
  CHECK(phi.kraus.size() == 2);

  // Slicing is an involution on the stored Kraus family.
  CHECK((choi(complementary_of_stored(phi)).entries - choi(m).entries)
            .norm() <= 1e-12);

  QuantumChannel again = random_unitary_complement(2, 4, 7);
  REQUIRE(again.kraus.size() == phi.kraus.size());
  for (size_t i = 0; i < phi.kraus.size(); ++i)
    CHECK((again.kraus[i] - phi.kraus[i]).norm() == 0.0);

  // A single unitary makes the complement a constant channel, which is
  // exactly anti-degradable.
  QuantumChannel constant = random_unitary_complement(2, 1, 9);
  std::mt19937_64 rng(26);
  Mat o1 = apply_to(constant, testing::random_density(rng, 2));
  Mat o2 = apply_to(constant, testing::random_density(rng, 2));
  CHECK((o1 - o2).norm() <= 1e-12);
  CHECK(epsilon_antidegradable(constant).epsilon <= 1e-6);
}

TEST_CASE("random complements: exact degradability and the mixing trend") {
  // Two Kraus operators force exact degradability here: the optimizer finds
  // a perfect degrading map at both output sizes, so the scrambling trend
  // lives in the distance of the complement from the constant channel, not
  // in the degradability parameter itself.
  QuantumChannel cc = constant_channel(2, 2);
  double dev[2];
  int slot = 0;
  for (int dimb : {4, 16}) {
    QuantumChannel phi = random_unitary_complement(2, dimb, 3);
    DegradabilityReport rep = epsilon_degradable(phi);
    CHECK(rep.epsilon >= 0.0);
    CHECK(rep.epsilon <= 1e-6);
    CHECK(std::abs(rep.epsilon - rep.verified_epsilon) <= 1e-6);
    dev[slot] = diamond_norm_distance(complementary_of_stored(phi), cc);
    CHECK(rep.epsilon <= dev[slot] + 1e-7);
    ++slot;
  }
  // More unitaries scramble harder (seeded regression values).
  CHECK(dev[1] < dev[0]);
  CHECK(std::abs(dev[0] - 0.833710315) <= 1e-6);
  CHECK(std::abs(dev[1] - 0.376576966) <= 1e-6);
}

TEST_CASE("zoo channels round trip through the wire format") {
  for (const QuantumChannel& ch :
       {depolarizing(0.3), erasure(0.25), bb84(0.05, 0.2)}) {
    QuantumChannel back = channel_from_json(channel_to_json(ch));
    CHECK((choi(back).entries - choi(ch).entries).norm() <= 1e-10);
  }
}

TEST_CASE("family specs construct the right channels") {
  ChannelFamilySpec spec;
  spec.family = ChannelFamily::kDepolarizing;
  spec.p = 0.1;
  CHECK((choi(make_channel(spec)).entries - choi(depolarizing(0.1)).entries)
            .norm() <= 1e-14);
  spec.family = ChannelFamily::kBb84;
  spec.p_x = 0.01;
  spec.p_z = 0.02;
  CHECK((choi(make_channel(spec)).entries - choi(bb84(0.01, 0.02)).entries)
            .norm() <= 1e-14);
  spec.family = ChannelFamily::kRandomUnitaryComplement;
  spec.dim_a = 2;
  spec.dim_b = 4;
  spec.seed = 7;
  CHECK((choi(make_channel(spec)).entries -
         choi(random_unitary_complement(2, 4, 7)).entries)
            .norm() <= 1e-14);
}
