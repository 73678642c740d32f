#pragma once

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "specband/errors.hpp"
#include "specband/random.hpp"

namespace specband {

// Regularized least-squares state shared by the bandit policies:
//   V_t = Lambda + sum_s x_s x_s^T,   b_t = sum_s r_s x_s,   alpha_hat = V_t^{-1} b_t.
// Maintains V, its inverse (Sherman-Morrison with periodic refactorization),
// a Cholesky factor for posterior sampling, and the log-determinant ratio
// log(|V_t| / |Lambda|) accumulated incrementally.
class EllipsoidState {
 public:
  explicit EllipsoidState(const Eigen::VectorXd& reg_eigenvalues, int refactor_period = 256)
      : refactor_period_(refactor_period) {
    const int d = static_cast<int>(reg_eigenvalues.size());
    if (d < 1) throw ParamError("ellipsoid: empty prior spectrum");
    if (refactor_period_ < 1) throw ParamError("ellipsoid: refactor period must be >= 1");
    for (int i = 0; i < d; ++i)
      if (!(reg_eigenvalues[i] > 0.0))
        throw ParamError("ellipsoid: prior eigenvalues must be positive");
    V_ = reg_eigenvalues.asDiagonal();
    V_inv_ = reg_eigenvalues.cwiseInverse().asDiagonal();
    llt_.compute(V_);
    if (llt_.info() != Eigen::Success) throw NumericError("ellipsoid: prior factorization failed");
    b_ = Eigen::VectorXd::Zero(d);
    alpha_hat_ = Eigen::VectorXd::Zero(d);
    log_det_prior_ = reg_eigenvalues.array().log().sum();
    ws_.resize(d);
  }

  int dim() const { return static_cast<int>(b_.size()); }
  long rounds() const { return t_; }
  const Eigen::MatrixXd& V() const { return V_; }
  const Eigen::MatrixXd& V_inv() const { return V_inv_; }
  const Eigen::VectorXd& alpha_hat() const { return alpha_hat_; }

  void update(const Eigen::Ref<const Eigen::VectorXd>& x, double reward) {
    if (x.size() != b_.size()) throw ParamError("ellipsoid: feature size mismatch");
    ws_.noalias() = V_inv_ * x;
    const double w2 = x.dot(ws_);  // ||x||^2_{V^{-1}}, before the update
    V_.noalias() += x * x.transpose();
    V_inv_.noalias() -= ws_ * ws_.transpose() / (1.0 + w2);
    b_.noalias() += reward * x;
    llt_.rankUpdate(x, 1.0);
    if (llt_.info() != Eigen::Success) throw NumericError("ellipsoid: rank-1 update failed");
    log_det_incr_ += std::log1p(w2);
    ++t_;
    if (++since_refactor_ >= refactor_period_) refactor();
    alpha_hat_.noalias() = V_inv_ * b_;
  }

  // ||x||^2_{V^{-1}}. Every caller (exhaustive scan, lazy refresh, invariant
  // checks) must go through this one expression so tie-breaking stays
  // bit-identical across selection strategies.
  double width_squared(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != b_.size()) throw ParamError("ellipsoid: probe size mismatch");
    ws_.noalias() = V_inv_ * x;
    return x.dot(ws_);
  }
  double width(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return std::sqrt(width_squared(x));
  }

  // Posterior draw alpha_hat + v * V^{-1/2} z with z ~ N(0, I), via the
  // upper-triangular Cholesky factor: V = U^T U so U^{-1} z has covariance V^{-1}.
  Eigen::VectorXd sample(double v, Rng& rng) const {
    Eigen::VectorXd z(dim());
    for (int i = 0; i < dim(); ++i) z[i] = rng.normal();
    return alpha_hat_ + v * llt_.matrixU().solve(z);
  }

  // Force alpha_hat to a given vector by setting b = V alpha; used to probe
  // policy behaviour under a known estimate.
  void seed_estimate(const Eigen::VectorXd& alpha) {
    if (alpha.size() != b_.size()) throw ParamError("ellipsoid: estimate size mismatch");
    b_.noalias() = V_ * alpha;
    alpha_hat_.noalias() = V_inv_ * b_;
  }

  // log(|V_t| / |Lambda|), accumulated as sum log(1 + ||x_s||^2_{V_{s-1}^{-1}}).
  double log_det_ratio() const { return log_det_incr_; }
  // Same ratio from the current Cholesky factor; cross-checks the increments.
  double log_det_ratio_direct() const {
    return 2.0 * llt_.matrixLLT().diagonal().array().log().sum() - log_det_prior_;
  }
  // max |(V * V_inv - I)_ij|, the Sherman-Morrison drift.
  double inverse_drift() const {
    return ((V_ * V_inv_) - Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  }

  void refactor() {
    llt_.compute(V_);
    if (llt_.info() != Eigen::Success) throw NumericError("ellipsoid: refactorization failed");
    V_inv_ = llt_.solve(Eigen::MatrixXd::Identity(dim(), dim()));
    since_refactor_ = 0;
  }

 private:
  Eigen::MatrixXd V_;
  Eigen::MatrixXd V_inv_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd b_;
  Eigen::VectorXd alpha_hat_;
  double log_det_prior_ = 0.0;
  double log_det_incr_ = 0.0;
  long t_ = 0;
  int refactor_period_ = 256;
  int since_refactor_ = 0;
  mutable Eigen::VectorXd ws_;
};

}  // namespace specband
