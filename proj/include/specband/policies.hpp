#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specband/effective_dimension.hpp"
#include "specband/ellipsoid.hpp"
#include "specband/errors.hpp"
#include "specband/random.hpp"
#include "specband/spectral_basis.hpp"

namespace specband {

enum class AlgorithmId {
  kSpectralUcb,
  kSpectralTs,
  kSpectralEliminator,
  kLinUcb,
  kLinTs,
  kLinEliminator,
};

inline bool is_linear(AlgorithmId id) {
  return id == AlgorithmId::kLinUcb || id == AlgorithmId::kLinTs ||
         id == AlgorithmId::kLinEliminator;
}

inline std::string to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kSpectralUcb: return "spectral-ucb";
    case AlgorithmId::kSpectralTs: return "spectral-ts";
    case AlgorithmId::kSpectralEliminator: return "spectral-eliminator";
    case AlgorithmId::kLinUcb: return "lin-ucb";
    case AlgorithmId::kLinTs: return "lin-ts";
    case AlgorithmId::kLinEliminator: return "lin-eliminator";
  }
  throw ParamError("unknown algorithm id");
}

inline AlgorithmId parse_algorithm(const std::string& name) {
  if (name == "spectral-ucb") return AlgorithmId::kSpectralUcb;
  if (name == "spectral-ts") return AlgorithmId::kSpectralTs;
  if (name == "spectral-eliminator") return AlgorithmId::kSpectralEliminator;
  if (name == "lin-ucb") return AlgorithmId::kLinUcb;
  if (name == "lin-ts") return AlgorithmId::kLinTs;
  if (name == "lin-eliminator") return AlgorithmId::kLinEliminator;
  throw ParamError("unknown algorithm: " + name);
}

struct AlgoConfig {
  AlgorithmId algorithm = AlgorithmId::kSpectralUcb;
  double reg_lambda = 0.1;
  double scale = 1.0;  // c for UCB, v for TS, beta for the eliminator
  bool theoretical_scale = false;
  double noise_bound = 0.05;             // R
  std::optional<double> norm_bound;      // C, required for theoretical_scale
  double failure_prob = 0.05;            // delta
  long horizon = 100;                    // T
  bool lazy = false;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(reg_lambda > 0.0)) throw ParamError("config: reg_lambda must be positive");
    if (!(scale >= 0.0)) throw ParamError("config: confidence scale must be >= 0");
    if (!(noise_bound >= 0.0)) throw ParamError("config: noise bound must be >= 0");
    if (norm_bound && !(*norm_bound >= 0.0))
      throw ParamError("config: norm bound must be >= 0");
    if (!(failure_prob > 0.0 && failure_prob < 1.0))
      throw ParamError("config: failure probability must lie in (0, 1)");
    if (horizon < 1) throw ParamError("config: horizon must be >= 1");
  }
};

// c = R * sqrt(2 d log(1 + T/(K lambda)) + 8 log(1/delta)) + C, with K the
// zero-eigenvalue multiplicity and d the effective dimension.
inline double theoretical_ucb_scale(double R, double C, double delta, long T, int n_components,
                                    double reg_lambda, int eff_dim) {
  const double t = static_cast<double>(T);
  return R * std::sqrt(2.0 * eff_dim * std::log1p(t / (n_components * reg_lambda)) +
                       8.0 * std::log(1.0 / delta)) +
         C;
}

// v = R * sqrt(3 d log(1/delta + T/(delta lambda K))) + C.
inline double theoretical_ts_scale(double R, double C, double delta, long T, int n_components,
                                   double reg_lambda, int eff_dim) {
  const double t = static_cast<double>(T);
  return R * std::sqrt(3.0 * eff_dim *
                       std::log(1.0 / delta + t / (delta * reg_lambda * n_components))) +
         C;
}

// beta = R * sqrt(log(2 K (1 + log2 T) / delta)) + C, with K the number of arms.
inline double theoretical_eliminator_scale(double R, double C, double delta, long T,
                                           int n_arms) {
  const double t = static_cast<double>(T);
  return R * std::sqrt(std::log(2.0 * n_arms * (1.0 + std::log2(t)) / delta)) + C;
}

// One bandit algorithm instance. Not thread-safe during a run; independent
// instances may run on different threads.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int select_arm() = 0;
  virtual void observe(int arm, double reward) = 0;
  virtual const EllipsoidState& state() const = 0;
  virtual EllipsoidState& mutable_state() = 0;
  virtual std::string name() const = 0;
  virtual double scale() const = 0;
  virtual double log_det_bound() const = 0;
  virtual int effective_dim() const = 0;
  virtual long rounds_played() const = 0;
  virtual int num_arms() const = 0;
};

namespace detail {

class PolicyBase : public Policy {
 public:
  PolicyBase(std::shared_ptr<const SpectralBasis> basis, AlgoConfig cfg)
      : basis_(std::move(basis)), cfg_(std::move(cfg)), state_(basis_->reg_eigenvalues) {
    cfg_.validate();
    arms_t_ = basis_->eigenvectors.transpose();  // column a = feature of arm a
    means_.resize(basis_->num_arms());
    eff_dim_ = effective_dimension(*basis_, cfg_.horizon);
    if (basis_->truncated() && !cfg_.norm_bound)
      std::cerr << "warning: truncated basis without an explicit norm bound; the implied "
                   "bound refers to the truncated penalty\n";
    scale_ = resolve_scale();
    log_det_bound_ =
        eff_dim_ * std::log1p(static_cast<double>(cfg_.horizon) /
                              (basis_->n_components * basis_->reg_lambda));
  }

  void observe(int arm, double reward) override {
    if (arm < 0 || arm >= num_arms()) throw ParamError("observe: arm index out of range");
    state_.update(arms_t_.col(arm), reward);
    ++rounds_;
    post_observe();
  }

  const EllipsoidState& state() const override { return state_; }
  EllipsoidState& mutable_state() override { return state_; }
  std::string name() const override { return to_string(cfg_.algorithm); }
  double scale() const override { return scale_; }
  double log_det_bound() const override { return log_det_bound_; }
  int effective_dim() const override { return eff_dim_; }
  long rounds_played() const override { return rounds_; }
  int num_arms() const override { return static_cast<int>(arms_t_.cols()); }
  const AlgoConfig& config() const { return cfg_; }

 protected:
  virtual void post_observe() {}

  double resolve_scale() const {
    if (!cfg_.theoretical_scale) return cfg_.scale;
    if (!cfg_.norm_bound)
      throw ParamError("config: theoretical confidence scale requires a norm bound");
    const double R = cfg_.noise_bound;
    const double C = *cfg_.norm_bound;
    switch (cfg_.algorithm) {
      case AlgorithmId::kSpectralUcb:
      case AlgorithmId::kLinUcb:
        return theoretical_ucb_scale(R, C, cfg_.failure_prob, cfg_.horizon,
                                     basis_->n_components, basis_->reg_lambda, eff_dim_);
      case AlgorithmId::kSpectralTs:
      case AlgorithmId::kLinTs:
        return theoretical_ts_scale(R, C, cfg_.failure_prob, cfg_.horizon,
                                    basis_->n_components, basis_->reg_lambda, eff_dim_);
      case AlgorithmId::kSpectralEliminator:
      case AlgorithmId::kLinEliminator:
        return theoretical_eliminator_scale(R, C, cfg_.failure_prob, cfg_.horizon,
                                            basis_->num_arms());
    }
    throw ParamError("unknown algorithm id");
  }

  void compute_means(const Eigen::VectorXd& coeffs) {
    means_.noalias() = arms_t_.transpose() * coeffs;
  }
  // All selection paths must derive widths and index values through these two
  // helpers so lazy and exhaustive evaluation agree bitwise, ties included.
  double compute_width(int a) const {
    return std::sqrt(state_.width_squared(arms_t_.col(a)));
  }
  double index_value(int a, double width) const { return means_[a] + scale_ * width; }

  std::shared_ptr<const SpectralBasis> basis_;
  AlgoConfig cfg_;
  EllipsoidState state_;
  Eigen::MatrixXd arms_t_;  // L x N, column-contiguous arm features
  Eigen::VectorXd means_;
  double scale_ = 0.0;
  double log_det_bound_ = 0.0;
  int eff_dim_ = 1;
  long rounds_ = 0;
};

}  // namespace detail

// UCB over the confidence ellipsoid: a_t = argmax_a x_a^T alpha_hat + c ||x_a||_{V^-1},
// lowest index on ties. The lazy mode keeps a max-heap of stale index values:
// means are recomputed exactly every round (one mat-vec, they are not
// monotone), while widths can only shrink, so a stale width gives an upper
// bound on the index. Popped entries are recomputed through the shared width
// kernel and accepted only once fresh, which reproduces the exhaustive
// argmax exactly.
class SpectralUcbPolicy : public detail::PolicyBase {
 public:
  SpectralUcbPolicy(std::shared_ptr<const SpectralBasis> basis, AlgoConfig cfg)
      : PolicyBase(std::move(basis), std::move(cfg)) {
    const int n = num_arms();
    stale_width_.resize(n);
    width_round_.assign(n, -1);
    // Closed-form widths under V = diag(Lambda); marked stale so candidates
    // still pass through the kernel before acceptance.
    for (int a = 0; a < n; ++a)
      stale_width_[a] = std::sqrt(
          (arms_t_.col(a).array().square() / basis_->reg_eigenvalues.array()).sum());
  }

  int select_arm() override {
    compute_means(state_.alpha_hat());
    return cfg_.lazy ? select_lazy() : select_exhaustive();
  }

 private:
  struct HeapEntry {
    double key;
    int arm;
  };
  // Max-heap; among equal keys the smallest arm index surfaces first.
  static bool heap_less(const HeapEntry& a, const HeapEntry& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.arm > b.arm;
  }
  // Relative inflation applied to stale keys. Widths are mathematically
  // non-increasing but Sherman-Morrison roundoff can raise a recomputed width
  // by ~1e-15; the margin keeps stale keys genuine upper bounds.
  static constexpr double kStaleMargin = 1e-10;

  int select_exhaustive() {
    int best = 0;
    double best_key = index_value(0, compute_width(0));
    for (int a = 1; a < num_arms(); ++a) {
      const double key = index_value(a, compute_width(a));
      if (key > best_key) {
        best_key = key;
        best = a;
      }
    }
    return best;
  }

  int select_lazy() {
    const long round = state_.rounds();
    const int n = num_arms();
    heap_.clear();
    heap_.reserve(n);
    for (int a = 0; a < n; ++a) {
      double key = index_value(a, stale_width_[a]);
      if (width_round_[a] != round) key += kStaleMargin * (1.0 + std::abs(key));
      heap_.push_back({key, a});
    }
    std::make_heap(heap_.begin(), heap_.end(), heap_less);
    while (true) {
      std::pop_heap(heap_.begin(), heap_.end(), heap_less);
      const HeapEntry top = heap_.back();
      heap_.pop_back();
      if (width_round_[top.arm] == round) return top.arm;
      stale_width_[top.arm] = compute_width(top.arm);
      width_round_[top.arm] = round;
      heap_.push_back({index_value(top.arm, stale_width_[top.arm]), top.arm});
      std::push_heap(heap_.begin(), heap_.end(), heap_less);
    }
  }

  std::vector<double> stale_width_;
  std::vector<long> width_round_;  // state round at which the width was computed
  std::vector<HeapEntry> heap_;
};

// Thompson sampling: alpha_tilde = alpha_hat + v U^{-1} z from the Cholesky
// factor V = U^T U, then the lowest-index argmax of x_a^T alpha_tilde.
class SpectralTsPolicy : public detail::PolicyBase {
 public:
  SpectralTsPolicy(std::shared_ptr<const SpectralBasis> basis, AlgoConfig cfg)
      : PolicyBase(std::move(basis), std::move(cfg)), rng_(cfg_.seed) {}

  int select_arm() override {
    compute_means(state_.sample(scale_, rng_));
    int best = 0;
    for (int a = 1; a < num_arms(); ++a)
      if (means_[a] > means_[best]) best = a;
    return best;
  }

 private:
  Rng rng_;
};

// Phased elimination. Phase j starts at round 2^{j-1} (1-indexed); at each
// phase start V resets to the prior. Within a phase the surviving arm of
// largest width is played; at phase end the within-phase estimate eliminates
// every arm whose optimistic value falls below the best pessimistic one. The
// pessimistic argmax always survives, so the active set never empties. The
// single-pull first phase skips elimination.
class SpectralEliminatorPolicy : public detail::PolicyBase {
 public:
  SpectralEliminatorPolicy(std::shared_ptr<const SpectralBasis> basis, AlgoConfig cfg)
      : PolicyBase(std::move(basis), std::move(cfg)) {
    active_.assign(num_arms(), 1);
  }

  int select_arm() override {
    int best = -1;
    double best_w2 = -1.0;
    for (int a = 0; a < num_arms(); ++a) {
      if (!active_[a]) continue;
      const double w2 = state_.width_squared(arms_t_.col(a));
      if (w2 > best_w2) {
        best_w2 = w2;
        best = a;
      }
    }
    return best;
  }

  int phase() const { return phase_; }
  const std::vector<char>& active() const { return active_; }
  int active_count() const {
    return static_cast<int>(std::count(active_.begin(), active_.end(), char(1)));
  }

  static std::vector<long> eliminator_phase_starts(long horizon) {
    std::vector<long> starts;
    for (long t = 1; t <= horizon; t *= 2) starts.push_back(t);
    return starts;
  }

 protected:
  void post_observe() override {
    ++phase_pulls_;
    if (rounds_ == (1L << phase_) - 1) end_phase();
  }

 private:
  void end_phase() {
    compute_means(state_.alpha_hat());
    const int n = num_arms();
    widths_.resize(n);
    double best_pessimistic = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
      if (!active_[a]) continue;
      widths_[a] = compute_width(a);
      best_pessimistic = std::max(best_pessimistic, means_[a] - scale_ * widths_[a]);
    }
    const bool skip = phase_ == 1 && phase_pulls_ == 1;
    if (!skip)
      for (int a = 0; a < n; ++a)
        if (active_[a] && index_value(a, widths_[a]) < best_pessimistic) active_[a] = 0;
    ++phase_;
    phase_pulls_ = 0;
    state_ = EllipsoidState(basis_->reg_eigenvalues);
  }

  std::vector<char> active_;
  std::vector<double> widths_;
  int phase_ = 1;
  long phase_pulls_ = 0;
};

// Linear variants share the spectral code paths with the penalty flattened
// to a plain ridge; features stay the rows of Q.
inline std::unique_ptr<Policy> make_policy(std::shared_ptr<const SpectralBasis> basis,
                                           const AlgoConfig& cfg) {
  if (!basis) throw ParamError("make_policy: null basis");
  if (basis->reg_lambda != cfg.reg_lambda)
    basis = std::make_shared<SpectralBasis>(with_reg_lambda(*basis, cfg.reg_lambda));
  if (is_linear(cfg.algorithm))
    basis = std::make_shared<SpectralBasis>(with_flat_spectrum(*basis));
  switch (cfg.algorithm) {
    case AlgorithmId::kSpectralUcb:
    case AlgorithmId::kLinUcb:
      return std::make_unique<SpectralUcbPolicy>(std::move(basis), cfg);
    case AlgorithmId::kSpectralTs:
    case AlgorithmId::kLinTs:
      return std::make_unique<SpectralTsPolicy>(std::move(basis), cfg);
    case AlgorithmId::kSpectralEliminator:
    case AlgorithmId::kLinEliminator:
      return std::make_unique<SpectralEliminatorPolicy>(std::move(basis), cfg);
  }
  throw ParamError("unknown algorithm id");
}

// Reference selections over explicit feature rows (arm v = row v); used as
// brute-force oracles and for driving a bare EllipsoidState.
inline int select_arm_ucb(const EllipsoidState& state, const Eigen::MatrixXd& arm_rows,
                          double c) {
  if (arm_rows.rows() < 1 || arm_rows.cols() != state.dim())
    throw ParamError("select_arm_ucb: feature matrix shape mismatch");
  int best = 0;
  double best_key = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < arm_rows.rows(); ++a) {
    const Eigen::VectorXd x = arm_rows.row(a).transpose();
    const double key = x.dot(state.alpha_hat()) + c * state.width(x);
    if (key > best_key) {
      best_key = key;
      best = a;
    }
  }
  return best;
}

inline int select_arm_ts(const EllipsoidState& state, const Eigen::MatrixXd& arm_rows, double v,
                         Rng& rng) {
  if (arm_rows.rows() < 1 || arm_rows.cols() != state.dim())
    throw ParamError("select_arm_ts: feature matrix shape mismatch");
  const Eigen::VectorXd alpha = state.sample(v, rng);
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < arm_rows.rows(); ++a) {
    const double val = arm_rows.row(a).dot(alpha);
    if (val > best_val) {
      best_val = val;
      best = a;
    }
  }
  return best;
}

}  // namespace specband
