#pragma once

#include <array>

#include "symtrot/circuit.hpp"
#include "symtrot/numerics.hpp"

namespace symtrot {

// Cartan (KAK) decomposition of a two-qubit unitary in the magic basis:
//   U = e^{i phase} (k1l (x) k1r) exp(i (a XX + b YY + c ZZ)) (k2l (x) k2r)
struct KakDecomposition {
  double phase = 0;
  Eigen::Matrix2cd k1l, k1r, k2l, k2r;
  double a = 0, b = 0, c = 0;
};

namespace kak_detail {

inline const Eigen::Matrix4cd& magic_basis() {
  static const Eigen::Matrix4cd B = [] {
    Eigen::Matrix4cd m;
    const cxd i1(0, 1);
    m << 1, 0, 0, i1,
         0, i1, 1, 0,
         0, i1, -1, 0,
         1, 0, 0, -i1;
    return Eigen::Matrix4cd(m / std::sqrt(2.0));
  }();
  return B;
}

// simultaneous real-orthogonal diagonalization of the commuting symmetric
// pair (Re P, Im P) for unitary symmetric P
inline Eigen::Matrix4d codiagonalize(const Eigen::Matrix4cd& P) {
  Eigen::Matrix4d X = (P.real() + P.real().transpose()) / 2;
  Eigen::Matrix4d Y = (P.imag() + P.imag().transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(X);
  Eigen::Matrix4d Q = es.eigenvectors();
  Eigen::Vector4d w = es.eigenvalues();
  int i = 0;
  while (i < 4) {
    int j = i;
    while (j + 1 < 4 && std::abs(w[j + 1] - w[i]) < 1e-8) ++j;
    if (j > i) {
      int n = j - i + 1;
      Eigen::MatrixXd blk = Q.middleCols(i, n);
      Eigen::MatrixXd yb = blk.transpose() * Y * blk;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2((yb + yb.transpose()) / 2);
      Q.middleCols(i, n) = blk * es2.eigenvectors();
    }
    i = j + 1;
  }
  if (Q.determinant() < 0) Q.col(3) *= -1;
  return Q;
}

// split a tensor-product 4x4 into its 2x2 factors (rank-1 reshuffle + SVD)
inline void kron_split(const Eigen::Matrix4cd& K, Eigen::Matrix2cd& a, Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd R;
  for (int r0 = 0; r0 < 2; ++r0)
    for (int r1 = 0; r1 < 2; ++r1)
      for (int c0 = 0; c0 < 2; ++c0)
        for (int c1 = 0; c1 < 2; ++c1)
          R(r0 * 2 + c0, r1 * 2 + c1) = K(r0 * 2 + r1, c0 * 2 + c1);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  double s0 = std::sqrt(svd.singularValues()[0]);
  Eigen::Vector4cd u = svd.matrixU().col(0) * s0;
  Eigen::Vector4cd v = svd.matrixV().col(0).conjugate() * s0;
  a << u[0], u[1], u[2], u[3];
  b << v[0], v[1], v[2], v[3];
  if ((kron(CMatrix(a), CMatrix(b)) - K).cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("kron_split: operator is not a tensor product");
}

}  // namespace kak_detail

inline KakDecomposition kak_decompose(const Eigen::Matrix4cd& U) {
  using namespace kak_detail;
  const Eigen::Matrix4cd& B = magic_basis();

  cxd det = U.determinant();
  double phase = std::arg(det) / 4;
  Eigen::Matrix4cd Usu = U * std::exp(cxd(0, -phase));
  Eigen::Matrix4cd Ut = B.adjoint() * Usu * B;
  Eigen::Matrix4cd P = Ut.transpose() * Ut;

  Eigen::Matrix4d Q = codiagonalize(P);
  Eigen::Matrix4cd D = Q.transpose() * P * Q;
  std::array<double, 4> th{};
  for (int k = 0; k < 4; ++k) th[k] = std::arg(D(k, k)) / 2;

  Eigen::Matrix4cd O1c;
  Eigen::Matrix4d O1;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::Vector4cd dinv;
    for (int k = 0; k < 4; ++k) dinv[k] = std::exp(cxd(0, -th[k]));
    O1c = Ut * Q.cast<cxd>() * dinv.asDiagonal();
    if (O1c.imag().cwiseAbs().maxCoeff() < 1e-8) {
      O1 = O1c.real();
      if (O1.determinant() > 0) break;
    }
    th[attempt % 4] += kPi;  // flip an eigenphase branch and retry
  }
  if (O1c.imag().cwiseAbs().maxCoeff() > 1e-8 || O1.determinant() < 0)
    throw std::runtime_error("kak_decompose: orthogonal factor extraction failed");

  double mean = (th[0] + th[1] + th[2] + th[3]) / 4;
  phase += mean;
  double t0 = th[0] - mean, t1 = th[1] - mean, t2 = th[2] - mean;
  KakDecomposition kd;
  kd.phase = phase;
  kd.a = (t0 + t1) / 2;
  kd.b = -(t0 + t2) / 2;
  kd.c = -(t1 + t2) / 2;

  Eigen::Matrix4cd K1 = B * O1.cast<cxd>() * B.adjoint();
  Eigen::Matrix4cd K2 = B * Q.transpose().cast<cxd>() * B.adjoint();
  kron_split(K1, kd.k1l, kd.k1r);
  kron_split(K2, kd.k2l, kd.k2r);

  // self-check: the decomposition must reproduce the input
  Eigen::Matrix4cd N = Eigen::Matrix4cd::Zero();
  {
    CMatrix gen = kd.a * kron(pauli_x(), pauli_x()) + kd.b * kron(pauli_y(), pauli_y()) +
                  kd.c * kron(pauli_z(), pauli_z());
    N = expm_hermitian(gen, cxd(0, 1));
  }
  Eigen::Matrix4cd rec = std::exp(cxd(0, kd.phase)) *
                         (kron(CMatrix(kd.k1l), CMatrix(kd.k1r)) * N *
                          kron(CMatrix(kd.k2l), CMatrix(kd.k2r)));
  if ((rec - U).cwiseAbs().maxCoeff() > 1e-9)
    throw std::runtime_error("kak_decompose: reconstruction check failed");
  return kd;
}

// ZXZ Euler angles of a one-qubit unitary: U = e^{i alpha} RZ(g) RX(b) RZ(d)
struct EulerZxz {
  double alpha = 0, z_after = 0, x_mid = 0, z_before = 0;
};

inline EulerZxz euler_zxz(const Eigen::Matrix2cd& U) {
  EulerZxz e;
  double c = std::abs(U(0, 0));
  double s = std::abs(U(0, 1));
  e.x_mid = 2 * std::atan2(s, c);
  if (s < 1e-12) {
    // diagonal: phases alone
    e.z_before = 0;
    e.z_after = std::arg(U(1, 1)) - std::arg(U(0, 0));
    e.alpha = (std::arg(U(0, 0)) + std::arg(U(1, 1))) / 2;
    e.x_mid = 0;
  } else if (c < 1e-12) {
    e.x_mid = kPi;
    e.z_before = 0;
    e.z_after = std::arg(U(1, 0)) - std::arg(U(0, 1));
    e.alpha = (std::arg(U(0, 1)) + std::arg(U(1, 0))) / 2 + kPi / 2;
  } else {
    e.alpha = (std::arg(U(0, 0)) + std::arg(U(1, 1))) / 2;
    double gpd = std::arg(U(1, 1)) - std::arg(U(0, 0));            // g + d
    double gmd = std::arg(U(1, 0)) - std::arg(U(0, 1));            // g - d
    e.z_after = (gpd + gmd) / 2;
    e.z_before = (gpd - gmd) / 2;
  }
  // canonical ranges with phase compensation (RZ(t + 2pi) = -RZ(t))
  auto wrap = [&](double& t) {
    while (t > kPi) { t -= 2 * kPi; e.alpha += kPi; }
    while (t <= -kPi) { t += 2 * kPi; e.alpha += kPi; }
    if (std::abs(t) < 1e-14) t = 0;
  };
  wrap(e.z_after);
  wrap(e.z_before);
  return e;
}

// append U (up to the returned phase contribution) as at most 3 rotations
inline double emit_local_1q(Circuit& c, const Eigen::Matrix2cd& U, int q) {
  EulerZxz e = euler_zxz(U);
  if (e.z_before != 0) c.rz(q, e.z_before);
  if (std::abs(e.x_mid) > 1e-14) c.rx(q, e.x_mid);
  if (e.z_after != 0) c.rz(q, e.z_after);
  return e.alpha;
}

// Canonical entangling block exp(i (a XX + b YY + c ZZ)) as a four-CNOT
// chain with one shared (control, target) orientation:
//   C e^{iaX0} H0 C e^{-ibZ1} C H0 e^{icZ1} C
inline void emit_canonical_chain(Circuit& c, double a, double b, double cc, int q0, int q1) {
  if (std::abs(a) < 1e-14 && std::abs(b) < 1e-14 && std::abs(cc) < 1e-14) return;
  c.cnot(q0, q1);
  c.rz(q1, -2 * cc);
  c.h(q0);
  c.cnot(q0, q1);
  c.rz(q1, 2 * b);
  c.cnot(q0, q1);
  c.h(q0);
  c.rx(q0, -2 * a);
  c.cnot(q0, q1);
}

}  // namespace symtrot
