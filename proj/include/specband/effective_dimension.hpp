#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "specband/errors.hpp"
#include "specband/graph.hpp"
#include "specband/spectral_basis.hpp"

namespace specband {

// Inputs for the dimension computations: the regularized spectrum
// lambda_1 <= ... <= lambda_L (all positive), the horizon, and the zero-mode
// multiplicity K of the underlying Laplacian.
struct EffDimInput {
  Eigen::VectorXd reg_eigenvalues;
  long horizon = 0;
  int n_components = 1;
  double reg_lambda = 0.0;

  static EffDimInput from_basis(const SpectralBasis& basis, long horizon) {
    EffDimInput in;
    in.reg_eigenvalues = basis.reg_eigenvalues;
    in.horizon = horizon;
    in.n_components = basis.n_components;
    in.reg_lambda = basis.reg_lambda;
    return in;
  }

  void validate() const {
    const int L = static_cast<int>(reg_eigenvalues.size());
    if (L < 1) throw ParamError("effdim: empty spectrum");
    if (horizon < 1) throw ParamError("effdim: horizon must be >= 1");
    if (n_components < 1 || n_components > L)
      throw ParamError("effdim: component count out of range");
    if (!(reg_lambda > 0.0)) throw ParamError("effdim: reg_lambda must be positive");
    for (int i = 0; i < L; ++i) {
      if (!(reg_eigenvalues[i] > 0.0))
        throw ParamError("effdim: regularized eigenvalues must be positive");
      if (i > 0 && reg_eigenvalues[i] < reg_eigenvalues[i - 1])
        throw ParamError("effdim: eigenvalues must be ascending");
    }
  }
};

struct WaterfillResult {
  Eigen::VectorXd allocation;  // t_i >= 0, sums to the horizon
  int omega = 0;               // number of strictly positive entries
  double log_objective = 0.0;  // sum_i log(1 + t_i / lambda_i), the maximum
};

// Maximizer of sum_i log(1 + t_i / lambda_i) over t >= 0 with sum t_i = T.
// Water-filling: raise levels on the smallest eigenvalues until the budget
// runs out. The active count omega is the largest w such that
// (sum_{j<=w} lambda_j + T) / w > lambda_w; failing the condition at w
// implies failing at w+1 (eigenvalues ascend), so one forward scan suffices.
inline WaterfillResult waterfill(const EffDimInput& in) {
  in.validate();
  const int L = static_cast<int>(in.reg_eigenvalues.size());
  const double T = static_cast<double>(in.horizon);
  double prefix = 0.0;
  int omega = 0;
  for (int w = 1; w <= L; ++w) {
    prefix += in.reg_eigenvalues[w - 1];
    if ((prefix + T) / w > in.reg_eigenvalues[w - 1])
      omega = w;
    else
      break;
  }
  double level_prefix = 0.0;
  for (int i = 0; i < omega; ++i) level_prefix += in.reg_eigenvalues[i];
  const double level = (level_prefix + T) / omega;
  WaterfillResult out;
  out.allocation = Eigen::VectorXd::Zero(L);
  out.omega = omega;
  for (int i = 0; i < omega; ++i) out.allocation[i] = level - in.reg_eigenvalues[i];
  for (int i = 0; i < L; ++i)
    out.log_objective += std::log1p(out.allocation[i] / in.reg_eigenvalues[i]);
  return out;
}

namespace detail {

// Ceiling with a relative slack so ratios that are integral up to roundoff
// do not get bumped to the next integer.
inline long ceil_with_slack(double r) {
  return static_cast<long>(std::ceil(r - 1e-12 * std::max(1.0, std::abs(r))));
}

}  // namespace detail

// Effective dimension d: the water-filling objective divided by
// log(1 + T / (K * lambda)), rounded up, clamped to [1, L].
inline int effective_dimension(const EffDimInput& in) {
  const WaterfillResult wf = waterfill(in);
  const double T = static_cast<double>(in.horizon);
  const double denom = std::log1p(T / (in.n_components * in.reg_lambda));
  const long d = detail::ceil_with_slack(wf.log_objective / denom);
  const long L = static_cast<long>(in.reg_eigenvalues.size());
  return static_cast<int>(std::clamp(d, 1L, L));
}

inline int effective_dimension(const SpectralBasis& basis, long horizon) {
  return effective_dimension(EffDimInput::from_basis(basis, horizon));
}

// Threshold form: the largest d such that (d - 1) * lambda_d <= T / log(1 + T / lambda).
// The left side is nondecreasing in d, so scan forward and stop at the first
// violation. A relative slack keeps boundary cases stable.
inline int old_effective_dimension(const EffDimInput& in) {
  in.validate();
  const int L = static_cast<int>(in.reg_eigenvalues.size());
  const double T = static_cast<double>(in.horizon);
  const double budget = T / std::log1p(T / in.reg_lambda);
  int d = 1;
  for (int cand = 2; cand <= L; ++cand) {
    const double lhs = (cand - 1) * in.reg_eigenvalues[cand - 1];
    if (lhs <= budget * (1.0 + 1e-12))
      d = cand;
    else
      break;
  }
  return d;
}

inline int old_effective_dimension(const SpectralBasis& basis, long horizon) {
  return old_effective_dimension(EffDimInput::from_basis(basis, horizon));
}

// Quadratic form f^T L f computed edge-wise: sum_{(u,v)} w_uv (f_u - f_v)^2.
inline double smoothness(const WeightedGraph& g, const Eigen::VectorXd& f) {
  if (f.size() != g.num_nodes()) throw ParamError("smoothness: vector size mismatch");
  double s = 0.0;
  for (const auto& e : g.edges()) {
    const double d = f[e.u] - f[e.v];
    s += e.w * d * d;
  }
  return s;
}

// ||alpha||_Lambda = sqrt(sum_i lambda_i alpha_i^2) in the regularized spectrum.
inline double lambda_norm(const Eigen::VectorXd& alpha, const SpectralBasis& basis) {
  if (alpha.size() != basis.basis_size()) throw ParamError("lambda_norm: size mismatch");
  return std::sqrt(alpha.array().square().matrix().dot(basis.reg_eigenvalues));
}

}  // namespace specband
