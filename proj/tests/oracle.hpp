#pragma once

// Reference linear algebra for the tests, written with plain Kronecker
// products so that it shares no index arithmetic with modcom/dense.hpp.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;

inline Mat2 pauli(char c) {
  Mat2 m;
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

inline Mat2 proj(int bit) {
  Mat2 m = Mat2::Zero();
  m(bit, bit) = 1;
  return m;
}

// Tensor product over positions 0..n-1 (position 0 leftmost); unlisted
// positions carry the identity.
inline Mat kron_ops(int n, const std::map<int, Mat2>& ops) {
  Mat out = Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    auto it = ops.find(q);
    const Mat2 f = it == ops.end() ? Mat2::Identity() : it->second;
    Mat next = Eigen::kroneckerProduct(out, f);
    out = std::move(next);
  }
  return out;
}

// "XIZY" style, one letter per position.
inline Mat pauli_word(const std::string& w) {
  std::map<int, Mat2> ops;
  for (int q = 0; q < static_cast<int>(w.size()); ++q) ops[q] = pauli(w[q]);
  return kron_ops(static_cast<int>(w.size()), ops);
}

inline Mat cz(int n, int a, int b) {
  return kron_ops(n, {{a, proj(0)}}) + kron_ops(n, {{a, proj(1)}, {b, pauli('Z')}});
}

inline Mat cnot(int n, int control, int target) {
  return kron_ops(n, {{control, proj(0)}}) + kron_ops(n, {{control, proj(1)}, {target, pauli('X')}});
}

inline Mat zz_rotation(int n, int a, int b, double theta) {
  const Mat zz = kron_ops(n, {{a, pauli('Z')}, {b, pauli('Z')}});
  return (cplx(0, -theta / 2) * zz).exp();
}

inline Mat2 su2(const Eigen::Vector3d& axis, double angle) {
  const Mat2 gen = axis.x() * pauli('X') + axis.y() * pauli('Y') + axis.z() * pauli('Z');
  return (cplx(0, -angle / 2) * gen).exp();
}

// Trace out the listed positions of an n-qubit operator, by summing over
// basis states of the traced factors.
inline Mat partial_trace(const Mat& rho, int n, const std::vector<int>& traced) {
  std::vector<int> kept;
  for (int q = 0; q < n; ++q) {
    if (std::find(traced.begin(), traced.end(), q) == traced.end()) kept.push_back(q);
  }
  const int dk = 1 << kept.size();
  const int dt = 1 << traced.size();
  Mat out = Mat::Zero(dk, dk);
  auto full_index = [&](int ik, int it) {
    int idx = 0;
    for (int q = 0; q < n; ++q) {
      int bit = 0;
      auto pk = std::find(kept.begin(), kept.end(), q);
      if (pk != kept.end()) {
        const int pos = static_cast<int>(pk - kept.begin());
        bit = (ik >> (static_cast<int>(kept.size()) - 1 - pos)) & 1;
      } else {
        const int pos = static_cast<int>(std::find(traced.begin(), traced.end(), q) - traced.begin());
        bit = (it >> (static_cast<int>(traced.size()) - 1 - pos)) & 1;
      }
      idx = 2 * idx + bit;
    }
    return idx;
  };
  for (int i = 0; i < dk; ++i) {
    for (int j = 0; j < dk; ++j) {
      cplx s = 0;
      for (int t = 0; t < dt; ++t) s += rho(full_index(i, t), full_index(j, t));
      out(i, j) = s;
    }
  }
  return out;
}

inline double entropy(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  double s = 0;
  for (double l : es.eigenvalues()) {
    if (l > 1e-15) s -= l * std::log(l);
  }
  return s;
}

// -log of a full-rank density via the Schur-based matrix logarithm.
inline Mat minus_log(const Mat& rho) { return -rho.log(); }

// i Tr(rho [K_AB, K_BC]) with the K's given on the full ABC space.
inline cplx modcom(const Mat& rho, const Mat& kab, const Mat& kbc) {
  return cplx(0, 1) * (rho * (kab * kbc - kbc * kab)).trace();
}

inline Mat random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(nd(rng), nd(rng));
  }
  Eigen::HouseholderQR<Mat> qr(g);
  return qr.householderQ() * Mat::Identity(dim, dim);
}

}  // namespace oracle
