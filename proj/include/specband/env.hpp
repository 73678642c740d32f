#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specband/effective_dimension.hpp"
#include "specband/errors.hpp"
#include "specband/policies.hpp"
#include "specband/random.hpp"
#include "specband/spectral_basis.hpp"

namespace specband {

struct EnvOptions {
  int k_nonzero = 20;
  double magnitude = 1.0;
  double noise_bound = 0.05;     // R, noise uniform on [-R, R]
  bool rescale_unit_max = true;  // scale alpha so max |f| = 1
  bool clip = false;             // clamp rewards to [-1, 1]
};

// Smooth reward environment: alpha is supported on the k smallest-eigenvalue
// coordinates, f = Q alpha, pulls return f(arm) plus uniform noise. The alpha
// draw and the noise stream use separate derived seeds so the noise sequence
// does not depend on the support size.
class SmoothRewardEnv {
 public:
  SmoothRewardEnv(std::shared_ptr<const SpectralBasis> basis, const EnvOptions& opts,
                  std::uint64_t seed)
      : basis_(std::move(basis)), opts_(opts), noise_rng_(derive_seed(seed, 0x6e76)) {
    if (!basis_) throw ParamError("env: null basis");
    if (opts_.k_nonzero < 1 || opts_.k_nonzero > basis_->basis_size())
      throw ParamError("env: k_nonzero must lie in [1, basis size]");
    if (!(opts_.magnitude > 0.0)) throw ParamError("env: magnitude must be positive");
    if (!(opts_.noise_bound >= 0.0)) throw ParamError("env: noise bound must be >= 0");
    Rng alpha_rng(derive_seed(seed, 0xa1));
    alpha_ = Eigen::VectorXd::Zero(basis_->basis_size());
    for (int i = 0; i < opts_.k_nonzero; ++i) {
      double u;
      do {
        u = alpha_rng.symmetric_uniform(opts_.magnitude);
      } while (u == 0.0);
      alpha_[i] = u;
    }
    finalize();
  }

  // Test constructor with an explicit coefficient vector.
  SmoothRewardEnv(std::shared_ptr<const SpectralBasis> basis, Eigen::VectorXd alpha,
                  double noise_bound, std::uint64_t seed, bool clip = false)
      : basis_(std::move(basis)), noise_rng_(derive_seed(seed, 0x6e76)) {
    if (!basis_) throw ParamError("env: null basis");
    if (alpha.size() != basis_->basis_size()) throw ParamError("env: alpha size mismatch");
    if (!(noise_bound >= 0.0)) throw ParamError("env: noise bound must be >= 0");
    opts_.k_nonzero = static_cast<int>(alpha.size());
    opts_.noise_bound = noise_bound;
    opts_.rescale_unit_max = false;
    opts_.clip = clip;
    alpha_ = std::move(alpha);
    finalize();
  }

  const SpectralBasis& basis() const { return *basis_; }
  std::shared_ptr<const SpectralBasis> basis_ptr() const { return basis_; }
  const Eigen::VectorXd& alpha_true() const { return alpha_; }
  const Eigen::VectorXd& f() const { return f_; }
  double noise_bound() const { return opts_.noise_bound; }
  int num_arms() const { return static_cast<int>(f_.size()); }
  int best_arm() const { return best_arm_; }
  double best_value() const { return best_value_; }
  double alpha_lambda_norm() const { return lambda_norm(alpha_, *basis_); }
  double smoothness_value() const {
    return alpha_.array().square().matrix().dot(basis_->eigenvalues);
  }

  double pull(int arm) {
    if (arm < 0 || arm >= num_arms()) throw ParamError("env: arm index out of range");
    double r = f_[arm] + noise_rng_.symmetric_uniform(opts_.noise_bound);
    if (opts_.clip) r = std::clamp(r, -1.0, 1.0);
    return r;
  }

 private:
  void finalize() {
    f_.noalias() = basis_->eigenvectors * alpha_;
    if (opts_.rescale_unit_max) {
      const double m = f_.cwiseAbs().maxCoeff();
      if (m > 0.0) {
        f_ /= m;
        alpha_ /= m;
      }
    }
    if (opts_.clip) f_ = f_.cwiseMax(-1.0).cwiseMin(1.0);
    best_arm_ = 0;
    for (int v = 1; v < num_arms(); ++v)
      if (f_[v] > f_[best_arm_]) best_arm_ = v;
    best_value_ = f_[best_arm_];
  }

  std::shared_ptr<const SpectralBasis> basis_;
  EnvOptions opts_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd f_;
  Rng noise_rng_;
  int best_arm_ = 0;
  double best_value_ = 0.0;
};

struct RoundLog {
  long t;              // 1-indexed round
  int arm;
  double reward;       // observed, noisy
  double inst_regret;  // best_value - f(arm), noise-free
  double cum_regret;
};

struct RunRecord {
  std::string algorithm;
  std::uint64_t env_seed = 0;
  std::uint64_t algo_seed = 0;
  std::uint64_t graph_hash = 0;
  std::vector<std::pair<std::string, std::string>> config_snapshot;
  double wall_ms = 0.0;
  std::vector<RoundLog> rounds;

  double final_regret() const { return rounds.empty() ? 0.0 : rounds.back().cum_regret; }
};

struct RunOptions {
  bool check_invariants = false;
  int drift_check_every = 64;
};

// T rounds of select / pull / observe with regret accounting. With invariant
// checking on, the log-det bound is asserted every round and the inverse
// drift at a coarser cadence.
inline RunRecord run(SmoothRewardEnv& env, Policy& policy, long horizon,
                     const RunOptions& opts = {}) {
  if (horizon < 1) throw ParamError("run: horizon must be >= 1");
  if (policy.num_arms() != env.num_arms()) throw ParamError("run: arm count mismatch");
  RunRecord rec;
  rec.algorithm = policy.name();
  rec.rounds.reserve(horizon);
  const auto start = std::chrono::steady_clock::now();
  double cum = 0.0;
  for (long t = 1; t <= horizon; ++t) {
    const int arm = policy.select_arm();
    if (arm < 0 || arm >= env.num_arms()) throw NumericError("run: policy returned no arm");
    const double reward = env.pull(arm);
    policy.observe(arm, reward);
    if (opts.check_invariants) {
      const double ratio = policy.state().log_det_ratio();
      if (ratio > policy.log_det_bound() + 1e-6)
        throw NumericError("run: log-det ratio " + std::to_string(ratio) + " exceeds bound " +
                           std::to_string(policy.log_det_bound()) + " at round " +
                           std::to_string(t));
      if (opts.drift_check_every > 0 && t % opts.drift_check_every == 0 &&
          policy.state().inverse_drift() > 1e-8)
        throw NumericError("run: inverse drift exceeds 1e-8 at round " + std::to_string(t));
    }
    const double inst = env.best_value() - env.f()[arm];
    cum += inst;
    rec.rounds.push_back({t, arm, reward, inst, cum});
  }
  rec.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return rec;
}

}  // namespace specband
