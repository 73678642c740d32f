#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "specband/errors.hpp"
#include "specband/graph.hpp"

namespace specband {

namespace detail {

// Eigenvectors are sign-ambiguous; fix each column so its entry of largest
// magnitude (first such on ties) is positive. Keeps decompositions
// reproducible across runs and platforms with the same solver output.
inline void normalize_column_signs(Eigen::MatrixXd& Q) {
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    Eigen::Index best = 0;
    double mag = std::abs(Q(0, j));
    for (Eigen::Index i = 1; i < Q.rows(); ++i) {
      const double a = std::abs(Q(i, j));
      if (a > mag) {
        mag = a;
        best = i;
      }
    }
    if (Q(best, j) < 0.0) Q.col(j) = -Q.col(j);
  }
}

}  // namespace detail

// Laplacian eigenbasis with a ridge-regularized spectrum. Arm v has feature
// vector equal to row v of `eigenvectors`; the prior precision is
// diag(reg_eigenvalues) = diag(eigenvalues) + reg_lambda * I.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;      // ascending, first n_components exactly 0
  Eigen::MatrixXd eigenvectors;     // N x L, orthonormal columns
  Eigen::VectorXd reg_eigenvalues;  // eigenvalues + reg_lambda
  double reg_lambda = 0.0;
  int n_components = 1;  // multiplicity of the zero eigenvalue (graph components)

  int num_arms() const { return static_cast<int>(eigenvectors.rows()); }
  int basis_size() const { return static_cast<int>(eigenvectors.cols()); }
  bool truncated() const { return basis_size() < num_arms(); }
  Eigen::VectorXd arm_feature(int v) const {
    if (v < 0 || v >= num_arms()) throw ParamError("arm index out of range");
    return eigenvectors.row(v).transpose();
  }
};

// Dense symmetric eigendecomposition of a Laplacian, truncated to the
// `truncate_to` smallest eigenpairs (0 keeps all). The first
// min(n_components, L) eigenvalues are snapped to exactly zero and any
// remaining tiny negatives are clamped, so downstream code can rely on a
// nonnegative spectrum with an exact zero-eigenvalue multiplicity.
inline SpectralBasis eigendecompose(const Eigen::MatrixXd& laplacian, double reg_lambda,
                                    int truncate_to, int n_components) {
  const int n = static_cast<int>(laplacian.rows());
  if (n < 1 || laplacian.cols() != n) throw ParamError("basis: Laplacian must be square");
  if (!(reg_lambda > 0.0)) throw ParamError("basis: reg_lambda must be positive");
  if (truncate_to < 0 || truncate_to > n)
    throw ParamError("basis: truncation size out of range");
  if (n_components < 1 || n_components > n)
    throw ParamError("basis: component count out of range");
  const int L = truncate_to == 0 ? n : truncate_to;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigendecomposition failed to converge on a " + std::to_string(n) + "x" +
                       std::to_string(n) + " Laplacian");
  SpectralBasis basis;
  basis.eigenvalues = solver.eigenvalues().head(L);
  basis.eigenvectors = solver.eigenvectors().leftCols(L);
  detail::normalize_column_signs(basis.eigenvectors);
  const int zeros = std::min(n_components, L);
  basis.eigenvalues.head(zeros).setZero();
  for (int i = zeros; i < L; ++i)
    if (basis.eigenvalues[i] < 0.0) basis.eigenvalues[i] = 0.0;
  basis.reg_lambda = reg_lambda;
  basis.reg_eigenvalues = basis.eigenvalues.array() + reg_lambda;
  basis.n_components = n_components;
  return basis;
}

inline SpectralBasis eigendecompose(const WeightedGraph& g, double reg_lambda,
                                    int truncate_to = 0) {
  return eigendecompose(build_laplacian(g), reg_lambda, truncate_to, g.component_count());
}

// Same eigenvectors, different ridge. Cheap; reuses the decomposition.
inline SpectralBasis with_reg_lambda(const SpectralBasis& basis, double reg_lambda) {
  if (!(reg_lambda > 0.0)) throw ParamError("basis: reg_lambda must be positive");
  SpectralBasis out = basis;
  out.reg_lambda = reg_lambda;
  out.reg_eigenvalues = out.eigenvalues.array() + reg_lambda;
  return out;
}

// Drop the graph prior: keep the features (rows of Q) but make the penalty a
// plain ridge, diag(lambda * I). With a zero base spectrum every direction is
// a zero mode, so n_components spans the whole basis.
inline SpectralBasis with_flat_spectrum(const SpectralBasis& basis) {
  SpectralBasis out = basis;
  out.eigenvalues.setZero();
  out.reg_eigenvalues.setConstant(out.reg_lambda);
  out.n_components = out.basis_size();
  return out;
}

// First L eigenpairs of an existing basis; used to compare truncation levels
// without recomputing the decomposition.
inline SpectralBasis truncate_basis(const SpectralBasis& basis, int L) {
  if (L < 1 || L > basis.basis_size()) throw ParamError("basis: truncation size out of range");
  SpectralBasis out;
  out.eigenvalues = basis.eigenvalues.head(L);
  out.eigenvectors = basis.eigenvectors.leftCols(L);
  out.reg_eigenvalues = basis.reg_eigenvalues.head(L);
  out.reg_lambda = basis.reg_lambda;
  out.n_components = std::min(basis.n_components, L);
  return out;
}

}  // namespace specband
