#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace symtrot {

using cxd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

constexpr double kPi = 3.14159265358979323846;

inline CMatrix pauli_i() { return CMatrix::Identity(2, 2); }
inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, cxd(0, -1), cxd(0, 1), 0;
  return m;
}
inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_finite(const CMatrix& m) {
  return m.allFinite();
}

inline bool is_hermitian(const CMatrix& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) < tol;
}

inline bool is_unitary(const CMatrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())) < tol;
}

// (a (x) b)[(i*rb+k),(j*cb+l)] = a[i,j] * b[k,l]
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct Spectrum {
  Eigen::VectorXd eigenvalues;        // ascending
  std::vector<int> degeneracies;      // grouped at tolerance
  CMatrix eigenvectors;               // columns, same order as eigenvalues
};

inline Spectrum eig_hermitian(const CMatrix& h, double group_tol = 1e-9) {
  if (!is_hermitian(h))
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed");
  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  Eigen::Index i = 0;
  while (i < s.eigenvalues.size()) {
    Eigen::Index j = i;
    while (j + 1 < s.eigenvalues.size() &&
           s.eigenvalues[j + 1] - s.eigenvalues[i] < group_tol)
      ++j;
    s.degeneracies.push_back(static_cast<int>(j - i + 1));
    i = j + 1;
  }
  return s;
}

// exp(scale * h) for Hermitian h via the spectral decomposition.
inline CMatrix expm_hermitian(const CMatrix& h, cxd scale) {
  if (!is_hermitian(h))
    throw std::invalid_argument("expm_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  CVector d(solver.eigenvalues().size());
  for (Eigen::Index k = 0; k < d.size(); ++k)
    d[k] = std::exp(scale * solver.eigenvalues()[k]);
  return solver.eigenvectors() * d.asDiagonal() * solver.eigenvectors().adjoint();
}

// Frobenius distance minimized over a global phase.
inline double phase_distance(const CMatrix& a, const CMatrix& b) {
  cxd tr = (a.adjoint() * b).trace();
  cxd ph = std::abs(tr) > 1e-14 ? tr / std::abs(tr) : cxd(1, 0);
  return (a * ph - b).norm();
}

}  // namespace symtrot
