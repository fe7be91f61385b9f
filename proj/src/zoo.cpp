// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#include "qdeg/zoo.hpp"

#include <cmath>

namespace qdeg {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, Cplx(0, -1), Cplx(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// Appends sqrt(weight) * op unless the weight is exactly zero, so stored
// Kraus counts reflect the support of the mixture.
void push_weighted(std::vector<Mat>& list, double weight, const Mat& op) {
  if (weight > 0.0) list.push_back(std::sqrt(weight) * op);
}

// Uniform in (0, 1): 53-bit mantissa offset by half a ulp so log() is safe.
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

}  // namespace

QuantumChannel depolarizing(double p) {
  if (p < 0.0 || p > 1.0)
    throw DomainError("depolarizing: p must lie in [0, 1]");
  std::vector<Mat> k;
  push_weighted(k, 1.0 - p, Mat::Identity(2, 2));
  push_weighted(k, p / 3.0, pauli_x());
  push_weighted(k, p / 3.0, pauli_y());
  push_weighted(k, p / 3.0, pauli_z());
  return channel_from_kraus(k, 2, 2);
}

QuantumChannel bb84(double p_x, double p_z) {
  if (p_x < 0.0 || p_x > 0.5 || p_z < 0.0 || p_z > 0.5)
    throw DomainError("bb84: flip probabilities must lie in [0, 1/2]");
  std::vector<Mat> k;
  push_weighted(k, (1.0 - p_x) * (1.0 - p_z), Mat::Identity(2, 2));
  push_weighted(k, p_x * (1.0 - p_z), pauli_x());
  push_weighted(k, (1.0 - p_x) * p_z, pauli_z());
  push_weighted(k, p_x * p_z, Mat(pauli_x() * pauli_z()));
  return channel_from_kraus(k, 2, 2);
}

QuantumChannel amplitude_damping(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw DomainError("amplitude_damping: gamma must lie in [0, 1]");
  std::vector<Mat> k;
  Mat k0(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k.push_back(k0);
  if (gamma > 0.0) {
    Mat k1 = Mat::Zero(2, 2);
    k1(0, 1) = std::sqrt(gamma);
    k.push_back(k1);
  }
  return channel_from_kraus(k, 2, 2);
}

QuantumChannel erasure(double p) {
  if (p < 0.0 || p > 1.0) throw DomainError("erasure: p must lie in [0, 1]");
  std::vector<Mat> k;
  if (p < 1.0) {
    Mat k0 = Mat::Zero(3, 2);
    k0(0, 0) = k0(1, 1) = std::sqrt(1.0 - p);
    k.push_back(k0);
  }
  if (p > 0.0) {
    Mat k1 = Mat::Zero(3, 2), k2 = Mat::Zero(3, 2);
    k1(2, 0) = std::sqrt(p);
    k2(2, 1) = std::sqrt(p);
    k.push_back(k1);
    k.push_back(k2);
  }
  return channel_from_kraus(k, 2, 3);
}

QuantumChannel constant_channel(int dim_in, int dim_out) {
  if (dim_in < 1 || dim_out < 1)
    throw DomainError("constant_channel: dimensions must be positive");
  // Kraus {|i><j| / sqrt(dim_out)}: sums to tr(rho) * I/dim_out.
  std::vector<Mat> k;
  k.reserve(static_cast<size_t>(dim_in) * dim_out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim_out));
  for (int i = 0; i < dim_out; ++i)
    for (int j = 0; j < dim_in; ++j) {
      Mat m = Mat::Zero(dim_out, dim_in);
      m(i, j) = scale;
      k.push_back(m);
    }
  return channel_from_kraus(k, dim_in, dim_out);
}

Mat haar_unitary(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw DomainError("haar_unitary: dim must be positive");
  Mat g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const double amp = std::sqrt(-2.0 * std::log(uniform_open(rng)));
      const double ang = 2.0 * kPi * uniform_open(rng);
      g(r, c) = Cplx(amp * std::cos(ang), amp * std::sin(ang));
    }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const Cplx d = r(c, c);
    const double mag = std::abs(d);
    q.col(c) *= (mag > 0.0) ? d / mag : Cplx(1.0, 0.0);
  }
  return q;
}

QuantumChannel random_mixed_unitary(int dim, int count, std::uint64_t seed) {
  if (dim < 2) throw DomainError("random_mixed_unitary: dim must be >= 2");
  if (count < 1) throw DomainError("random_mixed_unitary: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Mat> k;
  const double w = 1.0 / std::sqrt(static_cast<double>(count));
  for (int i = 0; i < count; ++i) k.push_back(w * haar_unitary(dim, rng));
  return channel_from_kraus(k, dim, dim);
}

QuantumChannel random_unitary_complement(int dim_a, int dim_b,
                                         std::uint64_t seed) {
  if (dim_a < 2)
    throw DomainError("random_unitary_complement: dim_a must be >= 2");
  if (dim_b < 1)
    throw DomainError("random_unitary_complement: dim_b must be >= 1");
  return complementary_of_stored(random_mixed_unitary(dim_a, dim_b, seed));
}

QuantumChannel make_channel(const ChannelFamilySpec& spec) {
  switch (spec.family) {
    case ChannelFamily::kDepolarizing:
      return depolarizing(spec.p);
    case ChannelFamily::kBb84:
      return bb84(spec.p_x, spec.p_z);
    case ChannelFamily::kAmplitudeDamping:
      return amplitude_damping(spec.gamma);
    case ChannelFamily::kErasure:
      return erasure(spec.p);
    case ChannelFamily::kRandomUnitaryComplement:
      return random_unitary_complement(spec.dim_a, spec.dim_b, spec.seed);
  }
  throw DomainError("make_channel: unknown family");
}

}  // namespace qdeg
