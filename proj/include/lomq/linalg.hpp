// Copyright 2026 The lomq Authors
// SPDX-License-Identifier: Apache-2.0

// Dense linear-algebra kernels shared by the reduction pipeline. Everything
// here is a free function over Eigen expressions, templated on the scalar
// type through the argument's Derived type.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lomq/error.hpp"

namespace lomq::linalg {

template <typename Derived>
using Plain = typename Derived::PlainObject;

template <typename Derived>
using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename Derived>
Real<Derived> max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? Real<Derived>(0) : m.cwiseAbs().maxCoeff();
}

/// True when |m - m^T| <= rel_tol * max|m| entrywise.
template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, Real<Derived> rel_tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const auto scale = max_abs(m);
  if (scale == 0) return true;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// Largest relative deviation from symmetry, max|m - m^T| / max|m|.
template <typename Derived>
Real<Derived> asymmetry(const Eigen::MatrixBase<Derived>& m) {
  const auto scale = max_abs(m);
  if (scale == 0) return 0;
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

template <typename Derived>
Plain<Derived> symmetrized(const Eigen::MatrixBase<Derived>& m) {
  return (Real<Derived>(0.5) * (m + m.transpose())).eval();
}

/// (min, max) eigenvalue of a symmetric matrix.
template <typename Derived>
std::pair<Real<Derived>, Real<Derived>> eigen_range(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return {0, 0};
  Eigen::SelfAdjointEigenSolver<Plain<Derived>> solver(m, Eigen::EigenvaluesOnly);
  const auto& values = solver.eigenvalues();
  return {values.minCoeff(), values.maxCoeff()};
}

/// Spectral norm of a symmetric matrix.
template <typename Derived>
Real<Derived> symmetric_norm(const Eigen::MatrixBase<Derived>& m) {
  const auto [lo, hi] = eigen_range(m);
  return std::max(std::abs(lo), std::abs(hi));
}

/// PSD up to a relative tolerance: smallest eigenvalue >= -rel_tol * largest.
template <typename Derived>
bool is_positive_semidefinite(const Eigen::MatrixBase<Derived>& m, Real<Derived> rel_tol = 1e-12) {
  const auto [lo, hi] = eigen_range(m);
  return lo >= -rel_tol * std::max(hi, Real<Derived>(0));
}

/// Kernel membership test ||M s|| <= rel_tol ||M|| ||s||, with ||M|| supplied
/// by the caller so it is computed once per matrix.
template <typename MatrixType, typename VectorType>
bool in_kernel(const Eigen::MatrixBase<MatrixType>& m, const Eigen::MatrixBase<VectorType>& s,
               Real<MatrixType> m_norm, Real<MatrixType> rel_tol = 1e-9) {
  return (m * s).norm() <= rel_tol * m_norm * s.norm();
}

/// Orthonormal basis (as columns) of {x : A x = 0}, where singular values at or
/// below `threshold` count as zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> null_space(
    const Eigen::MatrixBase<Derived>& a, Real<Derived> threshold) {
  using Dense = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = a.cols();
  if (n == 0) return Dense(0, 0);
  if (a.rows() == 0) return Dense::Identity(n, n);
  Eigen::JacobiSVD<Dense> svd(Dense(a), Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

/// Schur-complement reduction of a quadratic form onto the `retained` columns
/// after minimising over the `eliminated` columns:
///
///   R^T (M - M E (E^T M E)^{-1} E^T M) R
///
/// Throws SingularCouplerBlock when E^T M E is numerically singular
/// (smallest eigenvalue <= singular_tol * largest).
template <typename MatrixType, typename EliminatedType, typename RetainedType>
Eigen::Matrix<typename MatrixType::Scalar, Eigen::Dynamic, Eigen::Dynamic> schur_reduce(
    const Eigen::MatrixBase<MatrixType>& m, const Eigen::MatrixBase<EliminatedType>& eliminated,
    const Eigen::MatrixBase<RetainedType>& retained, Real<MatrixType> singular_tol = 1e-18) {
  using Dense = Eigen::Matrix<typename MatrixType::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Dense m_retained = m * retained;
  Dense reduced = retained.transpose() * m_retained;
  if (eliminated.cols() > 0) {
    const Dense block = eliminated.transpose() * m * eliminated;
    const auto [lo, hi] = eigen_range(block);
    if (!(hi > 0) || lo <= singular_tol * hi) {
      throw Error(ErrorCode::SingularCouplerBlock,
                  "eliminated block is numerically singular (eigenvalue range [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "])");
    }
    const Dense cross = eliminated.transpose() * m_retained;
    reduced -= cross.transpose() * block.ldlt().solve(cross);
  }
  return symmetrized(reduced);
}

/// Dense Kronecker product.
template <typename A, typename B>
Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(const Eigen::MatrixBase<A>& a,
                                                                       const Eigen::MatrixBase<B>& b) {
  Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                         a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace lomq::linalg
