// Dense complex types for the three-qubit Hilbert space and the Pauli
// tensor-product assembly used to build 8x8 operators.
//
// Basis convention: |0> has sigma_z eigenvalue +1 and the basis index is
// 4*q1 + 2*q2 + q3, so |0>=|000>, |1>=|001>, ..., |7>=|111>.

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qbt {

using cplx = std::complex<double>;
using Matrix8cd = Eigen::Matrix<cplx, 8, 8>;
using Vector8cd = Eigen::Matrix<cplx, 8, 1>;

// An 8x8 unitary; callers may rely on U^dag U = I to 1e-12 in max norm.
using Unitary8 = Matrix8cd;

namespace pauli {

inline Eigen::Matrix2cd id() { return Eigen::Matrix2cd::Identity(); }

inline Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

inline Eigen::Matrix2cd y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline Eigen::Matrix2cd z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

/// Kronecker product a (x) b (x) c over qubits (1,2,3), qubit 1 most
/// significant in the basis index.
inline Matrix8cd kron3(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b,
                       const Eigen::Matrix2cd& c) {
  Matrix8cd out;
  for (int i1 = 0; i1 < 2; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < 2; ++i2)
        for (int j2 = 0; j2 < 2; ++j2)
          for (int i3 = 0; i3 < 2; ++i3)
            for (int j3 = 0; j3 < 2; ++j3)
              out(4 * i1 + 2 * i2 + i3, 4 * j1 + 2 * j2 + j3) =
                  a(i1, j1) * b(i2, j2) * c(i3, j3);
  return out;
}

/// Largest entry modulus; the norm used by all unitarity/agreement contracts.
inline double max_abs(const Matrix8cd& m) {
  double best = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) best = std::max(best, std::abs(m(i, j)));
  return best;
}

}  // namespace qbt
