// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#include "qdeg/channel.hpp"

#include <algorithm>
#include <string>

namespace qdeg {

namespace {

void require(bool cond, const char* what, const std::string& detail) {
  if (!cond) throw ShapeMismatch(std::string(what) + ": " + detail);
}

}  // namespace

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec vec_row_major(const Mat& m) {
  Vec v(m.rows() * m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
  return v;
}

Mat unvec_row_major(const Vec& v, int rows, int cols) {
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = v(r * cols + c);
  return m;
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double herm_operator_norm(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double herm_trace_norm(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

HermitianOperator HermitianOperator::create(const Mat& m) {
  if (m.rows() != m.cols())
    throw ShapeMismatch("HermitianOperator: matrix is not square");
  if (!is_hermitian(m, kHermTol))
    throw ShapeMismatch("HermitianOperator: not Hermitian within 1e-12");
  HermitianOperator h;
  h.dim = static_cast<int>(m.rows());
  // Store the exactly Hermitian part so downstream eigensolves are clean.
  h.entries = 0.5 * (m + m.adjoint());
  return h;
}

DensityOperator DensityOperator::create(const Mat& m) {
  DensityOperator rho;
  rho.base = HermitianOperator::create(m);
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.base.entries, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kConstructTol)
    throw DomainError("DensityOperator: negative eigenvalue below -1e-10");
  double tr = rho.base.entries.trace().real();
  if (std::abs(tr - 1.0) > kConstructTol)
    throw DomainError("DensityOperator: trace differs from 1 by more than 1e-10");
  return rho;
}

QuantumChannel channel_from_kraus(const std::vector<Mat>& kraus, int dim_in,
                                  int dim_out) {
  if (kraus.empty())
    throw ShapeMismatch("channel_from_kraus: empty Kraus list");
  if (dim_in <= 0 || dim_out <= 0)
    throw ShapeMismatch("channel_from_kraus: dimensions must be positive");
  for (const Mat& f : kraus)
    require(f.rows() == dim_out && f.cols() == dim_in,
            "channel_from_kraus", "Kraus operator has wrong shape");
  Mat acc = Mat::Zero(dim_in, dim_in);
  for (const Mat& f : kraus) acc += f.adjoint() * f;
  double residual = herm_operator_norm(acc - Mat::Identity(dim_in, dim_in));
  if (residual > kKrausCompletenessTol)
    throw CompletenessViolation(
        "channel_from_kraus: sum F^dag F deviates from identity by " +
        std::to_string(residual));
  QuantumChannel ch;
  ch.dim_in = dim_in;
  ch.dim_out = dim_out;
  ch.kraus = kraus;
  ch.completeness_residual = residual;
  return ch;
}

QuantumChannel identity_channel(int dim) {
  return channel_from_kraus({Mat::Identity(dim, dim)}, dim, dim);
}

ChoiMatrix choi(const QuantumChannel& channel) {
  const int n = channel.dim_out * channel.dim_in;
  Mat J = Mat::Zero(n, n);
  for (const Mat& f : channel.kraus) {
    Vec v = vec_row_major(f);
    J.noalias() += v * v.adjoint();
  }
  ChoiMatrix out;
  out.dim_in = channel.dim_in;
  out.dim_out = channel.dim_out;
  out.entries = J;
  return out;
}

QuantumChannel channel_from_choi(const ChoiMatrix& J) {
  const int din = J.dim_in, dout = J.dim_out;
  const int n = din * dout;
  require(J.entries.rows() == n && J.entries.cols() == n, "channel_from_choi",
          "Choi matrix size does not match dims");
  if (!is_hermitian(J.entries, kConstructTol))
    throw NotCompletelyPositive("channel_from_choi: Choi matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (J.entries + J.entries.adjoint()));
  if (es.eigenvalues().minCoeff() < -kConstructTol)
    throw NotCompletelyPositive(
        "channel_from_choi: Choi matrix has eigenvalue " +
        std::to_string(es.eigenvalues().minCoeff()));
  // Trace-preserving iff the partial trace over the output equals identity.
  Mat tr_out = partial_trace_matrix(J.entries, {dout, din}, {1});
  if ((tr_out - Mat::Identity(din, din)).cwiseAbs().maxCoeff() > kConstructTol)
    throw NotTracePreserving(
        "channel_from_choi: Tr_out J differs from the identity");
  std::vector<Mat> kraus;
  for (int k = n - 1; k >= 0; --k) {  // eigenvalues ascending; largest first
    double w = es.eigenvalues()(k);
    if (w <= kChoiRankCutoff) continue;
    Vec v = std::sqrt(w) * es.eigenvectors().col(k);
    kraus.push_back(unvec_row_major(v, dout, din));
  }
  if (kraus.empty())
    throw NotCompletelyPositive("channel_from_choi: Choi matrix is zero");
  return channel_from_kraus(kraus, din, dout);
}

QuantumChannel canonicalized(const QuantumChannel& channel) {
  return channel_from_choi(choi(channel));
}

Mat apply_matrix(const QuantumChannel& channel, const Mat& rho) {
  require(rho.rows() == channel.dim_in && rho.cols() == channel.dim_in,
          "apply", "state dimension does not match dim_in");
  Mat out = Mat::Zero(channel.dim_out, channel.dim_out);
  for (const Mat& f : channel.kraus) out.noalias() += f * rho * f.adjoint();
  return out;
}

DensityOperator apply(const QuantumChannel& channel, const DensityOperator& rho) {
  return DensityOperator::create(apply_matrix(channel, rho.matrix()));
}

StinespringIsometry stinespring(const QuantumChannel& channel) {
  const int de = channel.dim_env();
  StinespringIsometry v;
  v.dim_in = channel.dim_in;
  v.dim_out = channel.dim_out;
  v.dim_env = de;
  v.matrix = Mat::Zero(channel.dim_out * de, channel.dim_in);
  for (int x = 0; x < de; ++x)
    for (int b = 0; b < channel.dim_out; ++b)
      v.matrix.row(b * de + x) += channel.kraus[x].row(b);
  return v;
}

QuantumChannel complementary_of_stored(const QuantumChannel& channel) {
  const int de = channel.dim_env();
  // K_b(e, a) = F_e(b, a): tracing out the output instead of the environment.
  std::vector<Mat> sliced(channel.dim_out);
  for (int b = 0; b < channel.dim_out; ++b) {
    Mat k(de, channel.dim_in);
    for (int e = 0; e < de; ++e) k.row(e) = channel.kraus[e].row(b);
    sliced[b] = k;
  }
  return channel_from_kraus(sliced, channel.dim_in, de);
}

QuantumChannel complementary(const QuantumChannel& channel) {
  return complementary_of_stored(canonicalized(channel));
}

TransferMatrix transfer_matrix(const QuantumChannel& channel) {
  TransferMatrix t;
  t.dim_in = channel.dim_in;
  t.dim_out = channel.dim_out;
  t.entries = Mat::Zero(channel.dim_out * channel.dim_out,
                        channel.dim_in * channel.dim_in);
  for (const Mat& f : channel.kraus) t.entries += kron(f, f.conjugate());
  return t;
}

QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner) {
  require(inner.dim_out == outer.dim_in, "compose",
          "inner.dim_out must equal outer.dim_in");
  std::vector<Mat> prods;
  prods.reserve(outer.kraus.size() * inner.kraus.size());
  for (const Mat& g : outer.kraus)
    for (const Mat& f : inner.kraus) prods.push_back(g * f);
  return channel_from_kraus(prods, inner.dim_in, outer.dim_out);
}

QuantumChannel tensor_product(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<Mat> prods;
  prods.reserve(a.kraus.size() * b.kraus.size());
  for (const Mat& f : a.kraus)
    for (const Mat& g : b.kraus) prods.push_back(kron(f, g));
  return channel_from_kraus(prods, a.dim_in * b.dim_in, a.dim_out * b.dim_out);
}

Mat partial_trace_matrix(const Mat& op, const std::vector<int>& dims,
                         const std::vector<int>& keep) {
  long total = 1;
  for (int d : dims) {
    if (d <= 0) throw ShapeMismatch("partial_trace: nonpositive factor");
    total *= d;
  }
  require(op.rows() == total && op.cols() == total, "partial_trace",
          "product of dims does not match operator size");
  const int nf = static_cast<int>(dims.size());
  std::vector<bool> keep_mask(nf, false);
  for (int k : keep) {
    if (k < 0 || k >= nf) throw ShapeMismatch("partial_trace: bad keep index");
    keep_mask[k] = true;
  }
  // strides of each factor in the full row-major index
  std::vector<long> stride(nf, 1);
  for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  // Enumerate kept and traced multi-indices as flat offsets into the full
  // index; a full index is the sum of one kept and one traced offset.
  auto offsets_for = [&](bool want_kept) {
    std::vector<long> offs{0};
    for (int f = 0; f < nf; ++f) {
      if (keep_mask[f] != want_kept) continue;
      std::vector<long> next;
      next.reserve(offs.size() * dims[f]);
      for (long base : offs)
        for (int v = 0; v < dims[f]; ++v) next.push_back(base + v * stride[f]);
      offs.swap(next);
    }
    return offs;
  };
  const std::vector<long> kept_offsets = offsets_for(true);
  const std::vector<long> traced_offsets = offsets_for(false);
  const long kept_dim = static_cast<long>(kept_offsets.size());
  const long traced_dim = static_cast<long>(traced_offsets.size());

  Mat out = Mat::Zero(kept_dim, kept_dim);
  for (long r = 0; r < kept_dim; ++r)
    for (long c = 0; c < kept_dim; ++c) {
      Cplx s(0, 0);
      for (long t = 0; t < traced_dim; ++t)
        s += op(kept_offsets[r] + traced_offsets[t],
                kept_offsets[c] + traced_offsets[t]);
      out(r, c) = s;
    }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& op,
                                const std::vector<int>& dims,
                                const std::vector<int>& keep) {
  return HermitianOperator::create(partial_trace_matrix(op.entries, dims, keep));
}

}  // namespace qdeg
